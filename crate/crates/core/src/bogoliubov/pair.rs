use nalgebra::DMatrix;
use num_complex::Complex64;

use super::geometry::{CavityGeometry, RindlerGeometry};
use crate::error::{Error, Result};
use crate::gaussian::SymplecticMatrix;

pub type CMatrix = DMatrix<Complex64>;

/// Truncated Bogoliubov transformation between two mode bases.
///
/// Output annihilation operators are `b_m = sum_n (alpha_mn a_n - beta_mn a_n^dag)`.
/// Mode `m` (1-based) sits at row/column `m - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovPair {
    pub alpha: CMatrix,
    pub beta: CMatrix,
    /// Worst residual of the Bogoliubov identities on the trusted block
    /// (modes `1..=n/2`).
    pub truncation_defect: f64,
}

fn diagonal_phases(phases: impl Iterator<Item = f64>) -> CMatrix {
    let d: Vec<Complex64> = phases.map(|p| Complex64::from_polar(1.0, -p)).collect();
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d))
}

impl BogoliubovPair {
    pub fn new(alpha: CMatrix, beta: CMatrix) -> Result<Self> {
        if alpha.nrows() != alpha.ncols() || alpha.shape() != beta.shape() || alpha.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: alpha.nrows(),
                found: beta.nrows(),
            });
        }
        let mut pair = Self {
            alpha,
            beta,
            truncation_defect: 0.0,
        };
        pair.truncation_defect = pair.identity_residual(pair.trusted_modes());
        Ok(pair)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            alpha: CMatrix::identity(n, n),
            beta: CMatrix::zeros(n, n),
            truncation_defect: 0.0,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.alpha.nrows()
    }

    pub fn trusted_modes(&self) -> usize {
        (self.n_modes() / 2).max(1)
    }

    /// Free evolution of the inertial cavity for coordinate time `t_s`:
    /// `alpha = diag(e^{-i omega_n t})`.
    pub fn phase_evolution_minkowski(t_s: f64, geometry: &CavityGeometry) -> Self {
        let t = geometry.to_natural_time(t_s);
        Self {
            alpha: diagonal_phases((1..=geometry.n_max).map(|n| n as f64 * std::f64::consts::PI * t)),
            beta: CMatrix::zeros(geometry.n_max, geometry.n_max),
            truncation_defect: 0.0,
        }
    }

    /// Free evolution of the accelerated cavity for proper time `tau_s` at its
    /// centre: `alpha = diag(e^{-i Omega_n eta})`.
    pub fn phase_evolution_rindler(tau_s: f64, geometry: &CavityGeometry, rindler: &RindlerGeometry) -> Self {
        let tau = geometry.to_natural_time(tau_s);
        Self {
            alpha: diagonal_phases((1..=geometry.n_max).map(|n| rindler.mode_phase(n, tau))),
            beta: CMatrix::zeros(geometry.n_max, geometry.n_max),
            truncation_defect: 0.0,
        }
    }

    /// `self` after `first`: `alpha = a2 a1 + b2 conj(b1)`, `beta = a2 b1 + b2 conj(a1)`.
    pub fn after(&self, first: &BogoliubovPair) -> Result<Self> {
        compose(self, first)
    }

    /// Inverse transformation `(alpha^dag, -beta^T)`.
    pub fn inverse(&self) -> Self {
        Self {
            alpha: self.alpha.adjoint(),
            beta: -self.beta.transpose(),
            truncation_defect: self.truncation_defect,
        }
    }

    /// Worst deviation from the Bogoliubov identities on modes `1..=k`:
    /// both `inverse(B) o B` and `B o inverse(B)` must be the identity there.
    pub fn identity_residual(&self, k: usize) -> f64 {
        let k = k.min(self.n_modes());
        let (a, b) = (&self.alpha, &self.beta);
        // inverse(B) o B: columns
        let col_a = a.adjoint() * a - b.transpose() * b.conjugate();
        let col_b = a.adjoint() * b - b.transpose() * a.conjugate();
        // B o inverse(B): rows
        let row_a = a * a.adjoint() - b * b.adjoint();
        let row_b = b * a.transpose() - a * b.transpose();
        let mut worst: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                let delta = if i == j { 1.0 } else { 0.0 };
                worst = worst
                    .max((col_a[(i, j)] - delta).norm())
                    .max(col_b[(i, j)].norm())
                    .max((row_a[(i, j)] - delta).norm())
                    .max(row_b[(i, j)].norm());
            }
        }
        worst
    }

    /// Quadrature representation. The `(m, n)` block is
    /// `[[Re(a - b), -Im(a + b)], [Im(a - b), Re(a + b)]]`, so that
    /// `alpha = e^{-i theta}` maps to `[[cos, sin], [-sin, cos]]`.
    pub fn to_symplectic(&self) -> SymplecticMatrix {
        let n = self.n_modes();
        let mut s = DMatrix::zeros(2 * n, 2 * n);
        for m in 0..n {
            for k in 0..n {
                let (a, b) = (self.alpha[(m, k)], self.beta[(m, k)]);
                let (diff, sum) = (a - b, a + b);
                s[(2 * m, 2 * k)] = diff.re;
                s[(2 * m, 2 * k + 1)] = -sum.im;
                s[(2 * m + 1, 2 * k)] = diff.im;
                s[(2 * m + 1, 2 * k + 1)] = sum.re;
            }
        }
        SymplecticMatrix::from_unchecked(s).expect("square even-dimensional matrix")
    }

    /// Largest entry-wise distance to another pair.
    pub fn max_distance(&self, other: &BogoliubovPair) -> f64 {
        (&self.alpha - &other.alpha)
            .iter()
            .chain((&self.beta - &other.beta).iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry-wise distance on the trusted block.
    pub fn max_distance_trusted(&self, other: &BogoliubovPair) -> f64 {
        let k = self.trusted_modes();
        let mut worst: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                worst = worst
                    .max((self.alpha[(i, j)] - other.alpha[(i, j)]).norm())
                    .max((self.beta[(i, j)] - other.beta[(i, j)]).norm());
            }
        }
        worst
    }
}

/// Successive transformation: first `b1`, then `b2`.
pub fn compose(b2: &BogoliubovPair, b1: &BogoliubovPair) -> Result<BogoliubovPair> {
    if b2.n_modes() != b1.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: b2.n_modes(),
            found: b1.n_modes(),
        });
    }
    let alpha = &b2.alpha * &b1.alpha + &b2.beta * b1.beta.conjugate();
    let beta = &b2.alpha * &b1.beta + &b2.beta * b1.alpha.conjugate();
    // pure phase pairs compose exactly
    if b2.beta.iter().chain(b1.beta.iter()).all(|z| *z == Complex64::new(0.0, 0.0))
        && b2.truncation_defect == 0.0
        && b1.truncation_defect == 0.0
    {
        return Ok(BogoliubovPair {
            alpha,
            beta,
            truncation_defect: 0.0,
        });
    }
    BogoliubovPair::new(alpha, beta)
}
