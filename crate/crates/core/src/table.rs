//! Plain tables with TSV and JSON encodings that carry identical values.

use serde::{Deserialize, Serialize};

/// Significant digits kept in reports.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Shortest decimal form of `round_sig(x)`.
pub fn fmt_sig(x: f64) -> String {
    format!("{}", round_sig(x))
}

/// One table entry. Reals are stored already rounded, so both encodings
/// hold the same number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Missing(Option<()>),
}

impl Cell {
    pub fn real(x: f64) -> Cell {
        if x.is_finite() {
            Cell::Real(round_sig(x))
        } else {
            Cell::Missing(None)
        }
    }

    pub fn opt_real(x: Option<f64>) -> Cell {
        x.map_or(Cell::Missing(None), Cell::real)
    }

    pub fn text(s: impl ToString) -> Cell {
        Cell::Text(s.to_string())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Real(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    fn tsv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => fmt_sig(*x),
            Cell::Text(s) => s.replace(['\t', '\n'], " "),
            Cell::Missing(_) => "NA".into(),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::real(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v.into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column, skipping missing entries.
    pub fn values(&self, name: &str) -> Vec<f64> {
        let Some(i) = self.column(name) else { return Vec::new() };
        self.rows.iter().filter_map(|r| r[i].as_f64()).collect()
    }

    /// Header line and rows, tab separated.
    pub fn to_tsv(&self) -> String {
        let mut out = self.columns.join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<_> = row.iter().map(Cell::tsv).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }
}
