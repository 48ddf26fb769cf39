//! CSV and JSON writers.

use std::fmt::Write as _;

use serde::Serialize;

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Int(n) => {
                let _ = write!(out, "{n}");
            }
            Cell::Real(x) => out.push_str(&format_e15(*x)),
            Cell::Text(s) => out.push_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Header plus rows, written in order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Comma-separated, `.` decimal point, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }
}

/// C `printf("%.15e")`: 16 significant digits, signed exponent with at least
/// two digits; `nan`, `inf`, `-inf` for non-finite values.
pub fn format_e15(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.15e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

#[derive(Debug, Serialize)]
pub struct Envelope<'a> {
    pub command: &'a str,
    pub params: serde_json::Value,
    pub results: serde_json::Value,
    pub library_version: &'static str,
    /// Seconds.
    pub wall_time: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printf_style_exponents() {
        assert_eq!(format_e15(1.0), "1.000000000000000e+00");
        assert_eq!(format_e15(-0.000123), "-1.230000000000000e-04");
        assert_eq!(format_e15(6.02214076e123), "6.022140760000000e+123");
        assert_eq!(format_e15(0.0), "0.000000000000000e+00");
        assert_eq!(format_e15(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["k", "lambda"]);
        t.push(vec![0usize.into(), 0.5.into()]);
        t.push(vec![1usize.into(), 0.25.into()]);
        assert_eq!(t.to_csv(), "k,lambda\n0,5.000000000000000e-01\n1,2.500000000000000e-01\n");
    }
}
