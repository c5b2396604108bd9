//! Marching squares over a grid of bin-center values, tolerating holes
//! (cells with any missing corner are skipped, leaving contour gaps).

/// Scalar field on bin centers: `values[j * xs.len() + i]` belongs to
/// (xs[i], ys[j]); `None` marks under-occupied bins.
#[derive(Debug, Clone)]
pub struct ContourGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<Option<f64>>,
}

impl ContourGrid {
    fn at(&self, i: usize, j: usize) -> Option<f64> {
        self.values[j * self.xs.len() + i]
    }
}

type Point = (f64, f64);

/// Extract the iso-level polylines. Cell corners strictly above the level
/// are "inside"; saddle cells are disambiguated by the corner average.
pub fn marching_squares(grid: &ContourGrid, level: f64) -> Vec<Vec<Point>> {
    assert_eq!(
        grid.values.len(),
        grid.xs.len() * grid.ys.len(),
        "grid size mismatch"
    );
    let mut segments: Vec<(Point, Point)> = Vec::new();
    if grid.xs.len() < 2 || grid.ys.len() < 2 {
        return Vec::new();
    }
    for j in 0..grid.ys.len() - 1 {
        for i in 0..grid.xs.len() - 1 {
            let corners = [
                grid.at(i, j),
                grid.at(i + 1, j),
                grid.at(i + 1, j + 1),
                grid.at(i, j + 1),
            ];
            let Some(v) = all_present(&corners) else {
                continue;
            };
            let (x0, x1) = (grid.xs[i], grid.xs[i + 1]);
            let (y0, y1) = (grid.ys[j], grid.ys[j + 1]);
            let mut case = 0usize;
            for (bit, val) in v.iter().enumerate() {
                if *val > level {
                    case |= 1 << bit;
                }
            }
            // Edge crossing points, lazily valid only when the edge is cut.
            let lerp = |a: f64, b: f64, va: f64, vb: f64| a + (level - va) / (vb - va) * (b - a);
            let bottom = || (lerp(x0, x1, v[0], v[1]), y0);
            let right = || (x1, lerp(y0, y1, v[1], v[2]));
            let top = || (lerp(x0, x1, v[3], v[2]), y1);
            let left = || (x0, lerp(y0, y1, v[0], v[3]));
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((left(), bottom())),
                2 | 13 => segments.push((bottom(), right())),
                3 | 12 => segments.push((left(), right())),
                4 | 11 => segments.push((right(), top())),
                6 | 9 => segments.push((bottom(), top())),
                7 | 8 => segments.push((left(), top())),
                5 | 10 => {
                    let center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                    let inside_diag = (case == 5) == (center > level);
                    if inside_diag {
                        segments.push((left(), top()));
                        segments.push((bottom(), right()));
                    } else {
                        segments.push((left(), bottom()));
                        segments.push((right(), top()));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    chain_segments(segments)
}

fn all_present(corners: &[Option<f64>; 4]) -> Option<[f64; 4]> {
    Some([corners[0]?, corners[1]?, corners[2]?, corners[3]?])
}

/// Join segments sharing endpooints into polylines (greedy walk over a
/// quantized endpoint index).
fn chain_segments(segments: Vec<(Point, Point)>) -> Vec<Vec<Point>> {
    use std::collections::HashMap;
    if segments.is_empty() {
        return Vec::new();
    }
    let quantum = 1e-9;
    let key = |p: Point| -> (i64, i64) {
        (
            (p.0 / quantum).round() as i64,
            (p.1 / quantum).round() as i64,
        )
    };
    let mut adjacency: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (idx, seg) in segments.iter().enumerate() {
        adjacency.entry(key(seg.0)).or_default().push(idx);
        adjacency.entry(key(seg.1)).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut line = vec![segments[start].0, segments[start].1];
        // extend forward from the tail, then backward from the head
        for end in 0..2 {
            loop {
                let tip = if end == 0 {
                    *line.last().unwrap()
                } else {
                    line[0]
                };
                let Some(candidates) = adjacency.get(&key(tip)) else {
                    break;
                };
                let next = candidates.iter().copied().find(|&c| !used[c]);
                let Some(c) = next else { break };
                used[c] = true;
                let (a, b) = segments[c];
                let far = if key(a) == key(tip) { b } else { a };
                if end == 0 {
                    line.push(far);
                } else {
                    line.insert(0, far);
                }
            }
        }
        polylines.push(line);
    }
    polylines
}
