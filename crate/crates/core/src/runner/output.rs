//! Deterministic CSV and plot-data serialization.

use std::io::Write;

use crate::error::Result;
use crate::protocol::FidelityReport;

/// Fixed-width scientific notation with 12 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.11e}")
}

/// `#`-prefixed `key: value` lines written above a CSV header.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata {
    entries: Vec<(String, String)>,
}

impl Metadata {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.entries.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        for (k, v) in &self.entries {
            writeln!(w, "# {k}: {v}")?;
        }
        Ok(())
    }
}

/// Column names for the report part of a row.
pub const REPORT_COLUMNS: [&str; 8] = [
    "phi",
    "F_raw",
    "F_corrected",
    "F_opt_numeric",
    "F_pert",
    "F_pert_opt",
    "nu",
    "residual_pert",
];

pub fn report_values(r: &FidelityReport) -> [f64; 8] {
    [
        r.phi,
        r.f_raw,
        r.f_corrected,
        r.f_opt_numeric,
        r.f_pert,
        r.f_pert_opt,
        r.nu,
        r.residual_pert,
    ]
}

/// Writes metadata, then a header and formatted numeric rows.
pub fn write_table<W: Write>(mut w: W, metadata: &Metadata, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    metadata.write_to(&mut w)?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(header)?;
    for row in rows {
        csv.write_record(row)?;
    }
    csv.flush()?;
    Ok(())
}
