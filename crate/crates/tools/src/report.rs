//! Deterministic report tables with CSV and JSONL renderings.

use std::collections::BTreeMap;

/// Output format of a rendered table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

/// A fixed-column table; rows are already-formatted strings so that
/// rendering is byte-deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row arity mismatch");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Jsonl => self.render_jsonl(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&join_csv(self.columns.iter().map(|c| (*c).to_string())));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&join_csv(row.iter().cloned()));
            out.push('\n');
        }
        out
    }

    fn render_jsonl(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let map: BTreeMap<&str, &str> = self
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| (*c, v.as_str()))
                .collect();
            out.push_str(&serde_json::to_string(&map).expect("string map serializes"));
            out.push('\n');
        }
        out
    }
}

fn join_csv(fields: impl Iterator<Item = String>) -> String {
    fields
        .map(|f| csv_field(&f))
        .collect::<Vec<_>>()
        .join(",")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Shortest round-tripping decimal rendering of a float.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Parses a JSONL rendering back into (columns ignored) row maps.
pub fn parse_jsonl(text: &str) -> Result<Vec<BTreeMap<String, String>>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}
