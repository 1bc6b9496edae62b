//! First-order (in `h`) coefficients by Richardson-extrapolated central
//! differences of exact transformations.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::oracle::OracleCache;
use super::pair::{BogoliubovPair, CMatrix};
use super::segment::one_segment_transform;
use crate::error::{Error, Result};

/// Step sequence `h0, h0/2, ..., h0/2^(levels-1)` for the central differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RichardsonLadder {
    pub h0: f64,
    pub levels: usize,
    /// Convergence target on the extrapolated entries.
    pub target: f64,
}

impl Default for RichardsonLadder {
    fn default() -> Self {
        Self {
            h0: 0.05,
            levels: 5,
            target: 1e-8,
        }
    }
}

impl RichardsonLadder {
    pub fn steps(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.levels).map(move |i| self.h0 / (1u64 << i) as f64)
    }
}

/// First-order coefficient matrices `d alpha/dh`, `d beta/dh` at `h = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrder {
    pub alpha1: CMatrix,
    pub beta1: CMatrix,
    /// Change of the last tableau diagonal entry (max norm).
    pub extrapolation_error: f64,
}

/// Extracts the first-order part of a family `transform(h)` that is analytic
/// in `h` around 0. Central differences cancel even orders, so the tableau
/// eliminates powers of `h^2`.
pub fn first_order<F>(transform: F, ladder: &RichardsonLadder) -> Result<FirstOrder>
where
    F: Fn(f64) -> Result<BogoliubovPair>,
{
    if ladder.levels < 2 || !(ladder.h0 > 0.0) {
        return Err(Error::Domain("Richardson ladder needs h0 > 0 and at least two levels".into()));
    }
    let mut rows: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(ladder.levels);
    let mut n = 0;
    for (i, h) in ladder.steps().enumerate() {
        let plus = transform(h)?;
        let minus = transform(-h)?;
        n = plus.n_modes();
        let slope: Vec<Complex64> = plus
            .alpha
            .iter()
            .zip(minus.alpha.iter())
            .chain(plus.beta.iter().zip(minus.beta.iter()))
            .map(|(p, m)| (p - m) / (2.0 * h))
            .collect();
        let mut row = vec![slope];
        for j in 1..=i {
            let factor = 4f64.powi(j as i32) - 1.0;
            let next: Vec<Complex64> = row[j - 1]
                .iter()
                .zip(rows[i - 1][j - 1].iter())
                .map(|(fine, coarse)| fine + (fine - coarse) / factor)
                .collect();
            row.push(next);
        }
        rows.push(row);
    }
    let last = &rows[ladder.levels - 1][ladder.levels - 1];
    let prev = &rows[ladder.levels - 2][ladder.levels - 2];
    let err = last
        .iter()
        .zip(prev.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if !(err <= ladder.target) {
        return Err(Error::ExtrapolationNonConvergence {
            achieved: err,
            target: ladder.target,
        });
    }
    // column-major storage, as produced by nalgebra iteration
    let alpha1 = DMatrix::from_column_slice(n, n, &last[..n * n]);
    let beta1 = DMatrix::from_column_slice(n, n, &last[n * n..]);
    Ok(FirstOrder {
        alpha1,
        beta1,
        extrapolation_error: err,
    })
}

/// `|alpha^(1)_mn|` predicted by the closed-form expansion (1-based modes).
pub fn ansatz_alpha1_abs(m: usize, n: usize) -> f64 {
    if (m + n) % 2 == 0 {
        return 0.0;
    }
    let d = (m as f64 - n as f64).abs();
    2.0 * ((m * n) as f64).sqrt() / (PI * PI * d.powi(3))
}

/// `|beta^(1)_mn|` predicted by the closed-form expansion (1-based modes).
pub fn ansatz_beta1_abs(m: usize, n: usize) -> f64 {
    if (m + n) % 2 == 0 {
        return 0.0;
    }
    2.0 * ((m * n) as f64).sqrt() / (PI * PI * ((m + n) as f64).powi(3))
}

/// Relative tolerance for declaring agreement with the closed form.
pub const ANSATZ_TOL: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbativeCoefficients {
    pub alpha1: CMatrix,
    pub beta1: CMatrix,
    pub extrapolation_error: f64,
    /// Worst relative deviation from the closed form over entries with `m+n` odd.
    pub ansatz_mismatch: f64,
}

impl PerturbativeCoefficients {
    pub fn ansatz_matches(&self) -> bool {
        self.ansatz_mismatch <= ANSATZ_TOL
    }

    /// Relative deviation of entry `(m, n)` (1-based) from the closed form, or
    /// `None` where the closed form vanishes.
    pub fn entry_mismatch(&self, m: usize, n: usize) -> Option<f64> {
        let a = ansatz_alpha1_abs(m, n);
        let b = ansatz_beta1_abs(m, n);
        if a == 0.0 {
            return None;
        }
        let da = (self.alpha1[(m - 1, n - 1)].norm() - a).abs() / a;
        let db = (self.beta1[(m - 1, n - 1)].norm() - b).abs() / b;
        Some(da.max(db))
    }

    /// Largest `|alpha1|, |beta1|` over entries with `m + n` even.
    pub fn even_parity_max(&self) -> f64 {
        let n = self.alpha1.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if (i + j) % 2 == 0 {
                    worst = worst
                        .max(self.alpha1[(i, j)].norm())
                        .max(self.beta1[(i, j)].norm());
                }
            }
        }
        worst
    }
}

/// First-order coefficients of the sudden switch, extracted from the oracle.
pub fn sudden_switch_perturbative(cache: &OracleCache, ladder: &RichardsonLadder) -> Result<PerturbativeCoefficients> {
    let fo = first_order(|h| cache.get(h).map(|p| (*p).clone()), ladder)?;
    let mut coeffs = PerturbativeCoefficients {
        alpha1: fo.alpha1,
        beta1: fo.beta1,
        extrapolation_error: fo.extrapolation_error,
        ansatz_mismatch: 0.0,
    };
    let n = coeffs.alpha1.nrows();
    let mut worst: f64 = 0.0;
    for m in 1..=n {
        for k in 1..=n {
            if let Some(d) = coeffs.entry_mismatch(m, k) {
                worst = worst.max(d);
            }
        }
    }
    coeffs.ansatz_mismatch = worst;
    Ok(coeffs)
}

/// The sums `f^alpha = 1/2 sum_n |alpha^(1)_{n,kp}|^2` and likewise for beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FSums {
    pub f_alpha: f64,
    pub f_beta: f64,
}

impl FSums {
    pub fn from_first_order(fo: &FirstOrder, kp: usize) -> Self {
        let col = kp - 1;
        let half_sq = |m: &CMatrix| 0.5 * m.column(col).iter().map(|z| z.norm_sqr()).sum::<f64>();
        Self {
            f_alpha: half_sq(&fo.alpha1),
            f_beta: half_sq(&fo.beta1),
        }
    }
}

/// Largest tolerated share of the f-sum envelope lying beyond the truncation.
pub const TAIL_TOL: f64 = 0.01;

/// Share of the closed-form envelope of column `kp` beyond mode `n_max`.
pub fn truncation_tail_estimate(kp: usize, n_max: usize) -> f64 {
    const CUTOFF: usize = 20_000;
    let env = |n: usize| ansatz_alpha1_abs(n, kp).powi(2) + ansatz_beta1_abs(n, kp).powi(2);
    let total: f64 = (1..=CUTOFF).map(env).sum();
    let tail: f64 = (n_max + 1..=CUTOFF).map(env).sum();
    tail / total
}

/// Rejects truncations that cannot resolve mode `kp`.
pub fn check_truncation(kp: usize, n_max: usize) -> Result<()> {
    if kp == 0 || kp > n_max / 2 {
        return Err(Error::TruncationInadequate {
            mode: kp,
            n_max,
            reason: format!("mode must satisfy 1 <= kp <= n_max/2 = {}", n_max / 2),
        });
    }
    let tail = truncation_tail_estimate(kp, n_max);
    if tail > TAIL_TOL {
        return Err(Error::TruncationInadequate {
            mode: kp,
            n_max,
            reason: format!("tail estimate {:.2}% exceeds {:.0}%", 100.0 * tail, 100.0 * TAIL_TOL),
        });
    }
    Ok(())
}

/// f-sums of Rob's mode `kp` for one accelerated interval of proper duration
/// `tau_s`. They are first-order quantities and so do not depend on `h`.
pub fn f_sums(kp: usize, tau_s: f64, cache: &OracleCache, ladder: &RichardsonLadder) -> Result<FSums> {
    check_truncation(kp, cache.geometry().n_max)?;
    let fo = first_order(|h| one_segment_transform(tau_s, h, cache), ladder)?;
    Ok(FSums::from_first_order(&fo, kp))
}
