//! CSV tables with `#` metadata lines.

use std::fmt::Write as _;

use crate::C64;

/// Shortest round-trip form; exponent notation for very large or small values.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        // normalize -0
        return "0.0".into();
    }
    format!("{v:?}")
}

/// `re+imi` / `re-imi`.
pub fn fmt_c64(z: C64) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im.is_sign_negative() {
        format!("{}{}i", fmt_f64(z.re), fmt_f64(im))
    } else {
        format!("{}+{}i", fmt_f64(z.re), fmt_f64(im))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Renders the table after the given metadata lines.
    pub fn render(&self, meta: &[String]) -> String {
        let mut out = String::new();
        for m in meta {
            let _ = writeln!(out, "# {m}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_format() {
        assert_eq!(fmt_c64(C64::new(1.5, -2.0)), "1.5-2.0i");
        assert_eq!(fmt_c64(C64::new(-0.0, 0.25)), "0.0+0.25i");
        assert_eq!(fmt_c64(C64::new(3.0, -0.0)), "3.0+0.0i");
        assert_eq!(fmt_f64(1e-20), "1e-20");
    }
}
