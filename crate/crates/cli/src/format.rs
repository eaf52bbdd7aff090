//! Plain-text table output: `%.12g` numbers and CSV files with a manifest line.

use std::fmt::Write as _;

/// Formats `v` like C's `%.12g`.
pub fn g12(v: f64) -> String {
    const PRECISION: i32 = 12;
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    fn key(&self) -> f64 {
        match *self {
            Cell::Int(i) => i as f64,
            Cell::Float(f) => f,
        }
    }

    fn render(&self) -> String {
        match *self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => g12(f),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u8> for Cell {
    fn from(v: u8) -> Self {
        Cell::Int(v.into())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v.into())
    }
}

/// A header plus numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Lexicographic order on the numeric values, left to right.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            a.iter().zip(b).map(|(x, y)| x.key().total_cmp(&y.key())).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        });
    }

    pub fn to_csv(&self, manifest_sha256: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(h) = manifest_sha256 {
            writeln!(out, "# manifest_sha256={h}").expect("string write");
        }
        writeln!(out, "{}", self.columns.join(",")).expect("string write");
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(out, "{}", cells.join(",")).expect("string write");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (1.0, "1"),
            (0.5, "0.5"),
            (-138.629436112, "-138.629436112"),
            (core::f64::consts::PI, "3.14159265359"),
            (1e-5, "1e-05"),
            (0.0001234, "0.0001234"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (2.0 / 3.0, "0.666666666667"),
            (-0.0, "-0"),
            (99999999999.99999, "100000000000"),
            (0.47700000000000004, "0.477"),
        ];
        for (v, expect) in cases {
            assert_eq!(g12(v), expect, "{v:e}");
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["phi", "N", "physical"]);
        t.push(vec![Cell::from(0.5), Cell::from(100u64), Cell::from(true)]);
        t.push(vec![Cell::from(0.25), Cell::from(1000u64), Cell::from(false)]);
        t.sort();
        assert_eq!(t.to_csv(Some("ab")), "# manifest_sha256=ab\nphi,N,physical\n0.25,1000,0\n0.5,100,1\n");
    }
}
