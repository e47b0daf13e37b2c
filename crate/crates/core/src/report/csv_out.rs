use std::io::Write;
use std::path::Path;

use super::{SweepTable, CELL_FIELDS};
use crate::Result;

/// `%g`-style formatting with `sig` significant digits: fixed notation for
/// decimal exponents in `[-5, sig)`, scientific otherwise, trailing zeros
/// dropped.
pub fn format_sig(v: f64, sig: usize) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= sig as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
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

pub fn header(table: &SweepTable) -> Vec<String> {
    let mut h = vec!["constraint".to_string()];
    for label in table.labels() {
        h.extend(CELL_FIELDS.iter().map(|f| format!("{label}_{f}")));
    }
    h
}

/// Writes the table as CSV: one row per constraint value, numbers with nine
/// significant digits, empty fields for infeasible cells.
pub fn write_csv<W: Write>(table: &SweepTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(table))?;
    for row in &table.rows {
        let mut record = vec![format_sig(row.constraint, 9)];
        for cell in &row.cells {
            match cell {
                Some(c) => record.extend(c.values().iter().map(|v| format_sig(*v, 9))),
                None => record.extend(std::iter::repeat_n(String::new(), CELL_FIELDS.len())),
            }
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(table: &SweepTable, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(table, std::io::BufWriter::new(file))
}
