use std::io::Write;

use num_complex::Complex64;

use super::output::{fmt_f64, write_table, Metadata};
use crate::bogoliubov::geometry::CavityGeometry;
use crate::bogoliubov::pair::BogoliubovPair;
use crate::bogoliubov::perturbative::{sudden_switch_perturbative, PerturbativeCoefficients, RichardsonLadder, ANSATZ_TOL};
use crate::bogoliubov::OracleCache;
use crate::error::{Error, Result};

/// First-order entries with `m + n` even must stay below this.
pub const EVEN_PARITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffRow {
    /// 1-based mode indices.
    pub m: usize,
    pub n: usize,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub abs_alpha1: f64,
    pub abs_beta1: f64,
    /// Agreement with the closed-form first-order magnitudes (zero for
    /// `m + n` even).
    pub closed_form_match: bool,
}

#[derive(Debug, Clone)]
pub struct CoeffTable {
    pub h: f64,
    pub pair: BogoliubovPair,
    pub first_order: PerturbativeCoefficients,
    pub rows: Vec<CoeffRow>,
}

impl CoeffTable {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.closed_form_match)
    }
}

/// Switch-on coefficients at `h` alongside their extrapolated first order.
pub fn coefficient_table(h: f64, geometry: &CavityGeometry, ladder: &RichardsonLadder) -> Result<CoeffTable> {
    if !(h > 0.0 && h < 2.0) {
        return Err(Error::Domain(format!("coefficient tables need 0 < h < 2, got {h}")));
    }
    let cache = OracleCache::new(*geometry);
    let pair = (*cache.get(h)?).clone();
    let first_order = sudden_switch_perturbative(&cache, ladder)?;
    let n_max = geometry.n_max;
    let mut rows = Vec::with_capacity(n_max * n_max);
    for m in 1..=n_max {
        for n in 1..=n_max {
            let abs_alpha1 = first_order.alpha1[(m - 1, n - 1)].norm();
            let abs_beta1 = first_order.beta1[(m - 1, n - 1)].norm();
            let closed_form_match = match first_order.entry_mismatch(m, n) {
                Some(d) => d <= ANSATZ_TOL,
                None => abs_alpha1 < EVEN_PARITY_TOL && abs_beta1 < EVEN_PARITY_TOL,
            };
            rows.push(CoeffRow {
                m,
                n,
                alpha: pair.alpha[(m - 1, n - 1)],
                beta: pair.beta[(m - 1, n - 1)],
                abs_alpha1,
                abs_beta1,
                closed_form_match,
            });
        }
    }
    Ok(CoeffTable {
        h,
        pair,
        first_order,
        rows,
    })
}

pub const COEFF_COLUMNS: [&str; 9] = [
    "m",
    "n",
    "re_alpha",
    "im_alpha",
    "re_beta",
    "im_beta",
    "abs_alpha1",
    "abs_beta1",
    "closed_form_match_flag",
];

pub fn write_coeffs_csv<W: Write>(w: W, table: &CoeffTable) -> Result<()> {
    let mut md = Metadata::new();
    md.push("tool", format!("cvtele {}", env!("CARGO_PKG_VERSION")))
        .push("h", fmt_f64(table.h))
        .push("n_max", table.pair.n_modes().to_string())
        .push("truncation_defect", fmt_f64(table.pair.truncation_defect))
        .push("extrapolation_error", fmt_f64(table.first_order.extrapolation_error))
        .push("closed_form_worst_relative_mismatch", fmt_f64(table.first_order.ansatz_mismatch));
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            let mut v = vec![r.m.to_string(), r.n.to_string()];
            v.extend(
                [r.alpha.re, r.alpha.im, r.beta.re, r.beta.im, r.abs_alpha1, r.abs_beta1]
                    .into_iter()
                    .map(fmt_f64),
            );
            v.push(r.closed_form_match.to_string());
            v
        })
        .collect();
    write_table(w, &md, &COEFF_COLUMNS, &rows)
}
