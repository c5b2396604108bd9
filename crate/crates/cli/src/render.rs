//! Hand-emitted SVG renderings of the output tables: line plots, heatmaps
//! and scatter plots with plain linear axes. These are reproduction aids,
//! not publication graphics.

use crate::table::{format_f64, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Lines,
    Heatmap,
    Scatter,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

const SERIES_COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

struct Axis {
    lo: f64,
    span: f64,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>) -> Axis {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() || !hi.is_finite() {
            lo = 0.0;
            hi = 1.0;
        }
        if hi - lo < 1e-300 {
            hi = lo + 1.0;
        }
        let pad = 0.03 * (hi - lo);
        Axis {
            lo: lo - pad,
            span: (hi - lo) + 2.0 * pad,
        }
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN_L + (v - self.lo) / self.span * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_B - (v - self.lo) / self.span * (HEIGHT - MARGIN_T - MARGIN_B)
    }

    fn ticks(&self) -> Vec<f64> {
        (0..=5)
            .map(|i| self.lo + self.span * i as f64 / 5.0)
            .collect()
    }
}

/// Render a table to a standalone SVG document. The caller guarantees a
/// non-empty table.
pub fn render_svg(table: &Table, kind: PlotKind) -> String {
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    for line in table.provenance.comment_lines() {
        svg.push_str(&format!("<!-- {} -->\n", line.replace("--", "- -")));
    }
    svg.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">wedgesim {}</text>\n",
        MARGIN_L, table.provenance.subcommand
    ));
    match kind {
        PlotKind::Lines => render_lines(table, &mut svg),
        PlotKind::Scatter => render_scatter(table, &mut svg),
        PlotKind::Heatmap => render_heatmap(table, &mut svg),
    }
    svg.push_str("</svg>\n");
    svg
}

fn axes(svg: &mut String, x_axis: &Axis, y_axis: &Axis, x_label: &str, y_label: &str) {
    svg.push_str(&format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#444\"/>\n",
        WIDTH - MARGIN_L - MARGIN_R,
        HEIGHT - MARGIN_T - MARGIN_B
    ));
    for t in x_axis.ticks() {
        let x = x_axis.x(t);
        svg.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{}\" x2=\"{x:.1}\" y2=\"{}\" stroke=\"#444\"/>\n",
            HEIGHT - MARGIN_B,
            HEIGHT - MARGIN_B + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{}</text>\n",
            HEIGHT - MARGIN_B + 18.0,
            short(t)
        ));
    }
    for t in y_axis.ticks() {
        let y = y_axis.y(t);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y:.1}\" x2=\"{MARGIN_L}\" y2=\"{y:.1}\" stroke=\"#444\"/>\n",
            MARGIN_L - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{}</text>\n",
            MARGIN_L - 8.0,
            y + 4.0,
            short(t)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">{}</text>\n",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 12.0,
        x_label
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" \
         transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">{}</text>\n",
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        y_label
    ));
}

fn short(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let magnitude = v.abs();
    if (1e-3..1e4).contains(&magnitude) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

/// First column is x; every further column is one polyline series.
fn render_lines(table: &Table, svg: &mut String) {
    let x_axis = Axis::new(table.rows.iter().map(|r| r[0]));
    let y_axis = Axis::new(table.rows.iter().flat_map(|r| r[1..].to_vec()));
    axes(svg, &x_axis, &y_axis, &table.columns[0], "value");
    let mut starts: Vec<usize> = vec![0];
    starts.extend(&table.breaks);
    starts.push(table.rows.len());
    for series in 1..table.columns.len() {
        let color = SERIES_COLORS[(series - 1) % SERIES_COLORS.len()];
        for window in starts.windows(2) {
            let points: Vec<String> = table.rows[window[0]..window[1]]
                .iter()
                .map(|r| format!("{:.2},{:.2}", x_axis.x(r[0]), y_axis.y(r[series])))
                .collect();
            if points.len() > 1 {
                svg.push_str(&format!(
                    "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" \
                     points=\"{}\"/>\n",
                    points.join(" ")
                ));
            } else if let [only] = points.as_slice() {
                let (x, y) = only.split_once(',').unwrap();
                svg.push_str(&format!(
                    "<circle cx=\"{x}\" cy=\"{y}\" r=\"3\" fill=\"{color}\"/>\n"
                ));
            }
        }
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
             fill=\"{color}\">{}</text>\n",
            WIDTH - MARGIN_R - 120.0,
            MARGIN_T + 16.0 * series as f64,
            table.columns[series]
        ));
    }
}

/// Columns (x, y) or (x, y, ...) scattered as dots.
fn render_scatter(table: &Table, svg: &mut String) {
    let x_axis = Axis::new(table.rows.iter().map(|r| r[0]));
    let y_axis = Axis::new(table.rows.iter().map(|r| r[1]));
    axes(svg, &x_axis, &y_axis, &table.columns[0], &table.columns[1]);
    for row in &table.rows {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"#1f77b4\" fill-opacity=\"0.6\"/>\n",
            x_axis.x(row[0]),
            y_axis.y(row[1])
        ));
    }
}

/// Columns (x, y, value) on a rectangular grid, colored blue to red.
fn render_heatmap(table: &Table, svg: &mut String) {
    let mut xs: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
    let mut ys: Vec<f64> = table.rows.iter().map(|r| r[1]).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ys.dedup();
    let x_axis = Axis::new(xs.iter().copied());
    let y_axis = Axis::new(ys.iter().copied());
    axes(svg, &x_axis, &y_axis, &table.columns[0], &table.columns[1]);
    let vlo = table
        .rows
        .iter()
        .map(|r| r[2])
        .fold(f64::INFINITY, f64::min);
    let vhi = table
        .rows
        .iter()
        .map(|r| r[2])
        .fold(f64::NEG_INFINITY, f64::max);
    let cell_w = (WIDTH - MARGIN_L - MARGIN_R) / xs.len() as f64;
    let cell_h = (HEIGHT - MARGIN_T - MARGIN_B) / ys.len() as f64;
    for row in &table.rows {
        let t = if vhi > vlo {
            (row[2] - vlo) / (vhi - vlo)
        } else {
            0.5
        };
        let r = (255.0 * t) as u8;
        let b = (255.0 * (1.0 - t)) as u8;
        let g = (90.0 + 60.0 * (1.0 - (2.0 * t - 1.0).abs())) as u8;
        svg.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{cell_w:.2}\" height=\"{cell_h:.2}\" \
             fill=\"rgb({r},{g},{b})\"/>\n",
            x_axis.x(row[0]) - 0.5 * cell_w,
            y_axis.y(row[1]) - 0.5 * cell_h,
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{} in [{}, {}]</text>\n",
        MARGIN_L,
        MARGIN_T - 8.0,
        table.columns[2],
        format_f64(vlo),
        format_f64(vhi)
    ));
}
