//! Number formatting and row rendering for the three output formats.

use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Jsonl,
}

/// Six significant digits, trailing zeros trimmed but at least one decimal
/// kept; scientific outside `[1e-4, 1e6)`.
pub fn short(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&exp) {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').expect("scientific format");
        return format!("{}e{e}", trim(mantissa));
    }
    let decimals = (5 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new digit (9.999995 -> 10.00000)
    let s = if s.contains('.') { trim(&s) } else { s };
    if s.contains('.') {
        s
    } else {
        format!("{s}.0")
    }
}

fn trim(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn exact(x: f64) -> String {
    format!("{x:.16e}")
}

/// A row of edge endpoints followed by values.
pub struct EdgeTable {
    columns: &'static [&'static str],
    rows: Vec<(usize, usize, Vec<f64>)>,
    total: Option<f64>,
}

impl EdgeTable {
    pub fn new(columns: &'static [&'static str]) -> Self {
        EdgeTable {
            columns,
            rows: Vec::new(),
            total: None,
        }
    }

    pub fn push(&mut self, i: usize, j: usize, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push((i, j, values));
    }

    pub fn total(&mut self, value: f64) {
        self.total = Some(value);
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Table => {
                for (i, j, values) in &self.rows {
                    let cells: Vec<String> = values.iter().map(|&v| short(v)).collect();
                    let _ = writeln!(out, "{i} {j} {}", cells.join(" "));
                }
                if let Some(t) = self.total {
                    let _ = writeln!(out, "total {}", short(t));
                }
            }
            Format::Csv => {
                let _ = writeln!(out, "i,j,{}", self.columns.join(","));
                for (i, j, values) in &self.rows {
                    let cells: Vec<String> = values.iter().map(|&v| exact(v)).collect();
                    let _ = writeln!(out, "{i},{j},{}", cells.join(","));
                }
                if let Some(t) = self.total {
                    let pad = ",".repeat(self.columns.len());
                    let _ = writeln!(out, "total,{pad}{}", exact(t));
                }
            }
            Format::Jsonl => {
                for (i, j, values) in &self.rows {
                    let cells: Vec<String> = self
                        .columns
                        .iter()
                        .zip(values)
                        .map(|(c, &v)| format!("\"{c}\":{}", exact(v)))
                        .collect();
                    let _ = writeln!(out, "{{\"i\":{i},\"j\":{j},{}}}", cells.join(","));
                }
                if let Some(t) = self.total {
                    let _ = writeln!(out, "{{\"total\":{}}}", exact(t));
                }
            }
        }
        out
    }
}
