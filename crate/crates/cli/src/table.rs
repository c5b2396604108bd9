//! Numeric tables with provenance: CSV and JSON emission plus the CSV
//! reader used by `contour` and the round-trip tests. Numbers are written in
//! the shortest decimal form that parses back to the same double.

use std::io::Write;

use wedgesim_core::ENGINE_VERSION;

/// Header block written in front of every output. The recorded command is
/// fully resolved, so replaying it reproduces the file byte for byte;
/// derived metadata goes into notes, which stay out of the command.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub subcommand: &'static str,
    pub command: String,
    pub fields: Vec<(String, String)>,
    pub notes: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(subcommand: &'static str) -> Self {
        Provenance {
            subcommand,
            command: String::new(),
            fields: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// A resolved input parameter; becomes a flag of the replay command.
    pub fn field(&mut self, key: &str, value: impl std::fmt::Display) {
        self.fields.push((key.to_string(), value.to_string()));
    }

    /// Derived metadata recorded in the header only.
    pub fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    /// Canonical replayable command line from the resolved parameters.
    pub fn seal_command(&mut self, output: Option<&str>, format: &str) {
        let mut cmd = format!("wedgesim {}", self.subcommand);
        for (key, value) in &self.fields {
            cmd.push_str(&format!(" --{key} {value}"));
        }
        if let Some(path) = output {
            cmd.push_str(&format!(" --output {path}"));
        }
        cmd.push_str(&format!(" --format {format}"));
        self.command = cmd;
    }

    pub fn comment_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("wedgesim {}", self.subcommand),
            format!("engine_version = {ENGINE_VERSION}"),
            format!("command = {}", self.command),
        ];
        for (key, value) in self.fields.iter().chain(&self.notes) {
            lines.push(format!("{key} = {value}"));
        }
        lines
    }
}

/// Column-labelled rows of doubles. `breaks` marks the starts of the second
/// and later polylines in contour output.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub breaks: Vec<usize>,
    pub provenance: Provenance,
}

impl Table {
    pub fn new(columns: &[&str], provenance: Provenance) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            breaks: Vec::new(),
            provenance,
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        for line in self.provenance.comment_lines() {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for (i, row) in self.rows.iter().enumerate() {
            if self.breaks.contains(&i) {
                writeln!(out, "# polyline")?;
            }
            let cells: Vec<String> = row.iter().map(|v| format_f64(*v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn write_json(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{{")?;
        writeln!(
            out,
            "  \"tool\": \"wedgesim {}\",",
            self.provenance.subcommand
        )?;
        writeln!(out, "  \"engine_version\": {ENGINE_VERSION},")?;
        writeln!(
            out,
            "  \"command\": \"{}\",",
            escape_json(&self.provenance.command)
        )?;
        writeln!(out, "  \"parameters\": {{")?;
        let n = self.provenance.fields.len();
        for (i, (key, value)) in self.provenance.fields.iter().enumerate() {
            let comma = if i + 1 < n { "," } else { "" };
            writeln!(
                out,
                "    \"{}\": \"{}\"{comma}",
                escape_json(key),
                escape_json(value)
            )?;
        }
        writeln!(out, "  }},")?;
        let cols: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("\"{}\"", escape_json(c)))
            .collect();
        writeln!(out, "  \"columns\": [{}],", cols.join(", "))?;
        writeln!(out, "  \"rows\": [")?;
        for (i, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| format_f64(*v)).collect();
            let comma = if i + 1 < self.rows.len() { "," } else { "" };
            writeln!(out, "    [{}]{comma}", cells.join(", "))?;
        }
        writeln!(out, "  ]")?;
        writeln!(out, "}}")?;
        Ok(())
    }
}

/// Shortest round-trip decimal, scientific notation outside a readable
/// magnitude window; JSON needs a fractional marker on integral values to
/// keep them doubles on the way back in.
pub fn format_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && (a < 1e-4 || a >= 1e16) {
        return format!("{v:e}");
    }
    let s = format!("{v}");
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{s}.0")
    }
}

fn escape_json(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Parsed CSV: header plus rows, comments skipped.
pub struct ParsedCsv {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ParsedCsv {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

pub fn read_csv(text: &str) -> Result<ParsedCsv, String> {
    let mut lines = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#') && !l.trim().is_empty());
    let header = lines.next().ok_or("empty CSV")?;
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let mut row = Vec::with_capacity(columns.len());
        for cell in line.split(',') {
            row.push(
                cell.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("row {}: bad number {cell:?}: {e}", i + 2))?,
            );
        }
        if row.len() != columns.len() {
            return Err(format!(
                "row {}: expected {} cells, got {}",
                i + 2,
                columns.len(),
                row.len()
            ));
        }
        rows.push(row);
    }
    Ok(ParsedCsv { columns, rows })
}
