//! Gaussian states and symplectic linear algebra.
//!
//! # Quadrature convention
//!
//! Every matrix in this crate uses the same convention:
//!
//! - mode-major quadrature ordering `(x1, p1, x2, p2, ...)`;
//! - quadratures `x = a + a^dag`, `p = -i (a - a^dag)`, so the vacuum covariance
//!   matrix is the identity;
//! - symplectic form `Omega = (+) [[0, 1], [-1, 0]]`, with `Omega^2 = -I`.
//!
//! A mode whose annihilation operator evolves as `a -> e^{-i theta} a` has its
//! quadratures rotated by the block `[[cos theta, sin theta], [-sin theta, cos theta]]`.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance for the symmetry check.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Tolerance on the smallest eigenvalue of `sigma + i*Omega`.
pub const PHYSICALITY_TOL: f64 = 1e-9;
/// Relative mismatch allowed when pairing the eigenvalues of `iOmega M`.
pub const PAIRING_TOL: f64 = 1e-7;

/// Symplectic form for `n_modes` modes.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for j in 0..n_modes {
        omega[(2 * j, 2 * j + 1)] = 1.0;
        omega[(2 * j + 1, 2 * j)] = -1.0;
    }
    omega
}

/// Quadrature rotation for a phase `theta` (Heisenberg `a -> e^{-i theta} a`).
pub fn rotation_block(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, s, -s, c)
}

fn relative_asymmetry(m: &DMatrix<f64>) -> f64 {
    let scale = m.amax().max(f64::MIN_POSITIVE);
    (m - m.transpose()).amax() / scale
}

/// Smallest eigenvalue of the Hermitian matrix `sigma + i*Omega`.
pub fn heisenberg_min_eigenvalue(sigma: &DMatrix<f64>) -> f64 {
    let n_modes = sigma.nrows() / 2;
    let omega = symplectic_form(n_modes);
    let herm = DMatrix::from_fn(sigma.nrows(), sigma.ncols(), |i, j| {
        Complex64::new(0.5 * (sigma[(i, j)] + sigma[(j, i)]), omega[(i, j)])
    });
    let eig = SymmetricEigen::new(herm);
    eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Covariance matrix of an `n`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    data: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Validates shape, symmetry and the Heisenberg bound.
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let cm = Self::from_unchecked(data)?;
        let min_eig = heisenberg_min_eigenvalue(&cm.data);
        if min_eig < -PHYSICALITY_TOL {
            return Err(Error::Unphysical {
                min_eigenvalue: min_eig,
            });
        }
        Ok(cm)
    }

    /// Shape and symmetry checks only; the Heisenberg bound is not enforced.
    pub(crate) fn from_unchecked(data: DMatrix<f64>) -> Result<Self> {
        if data.nrows() != data.ncols() || data.nrows() % 2 != 0 || data.nrows() == 0 {
            return Err(Error::Domain(format!(
                "covariance matrix must be 2n x 2n, got {} x {}",
                data.nrows(),
                data.ncols()
            )));
        }
        let asym = relative_asymmetry(&data);
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self { data })
    }

    /// Vacuum state on `n_modes` modes.
    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            data: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.data.nrows() / 2
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.data
    }

    /// 2x2 block between modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> Matrix2<f64> {
        self.data.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
    }

    pub fn determinant(&self) -> f64 {
        self.data.determinant()
    }

    pub fn heisenberg_min_eigenvalue(&self) -> f64 {
        heisenberg_min_eigenvalue(&self.data)
    }

    pub fn is_physical(&self) -> bool {
        self.heisenberg_min_eigenvalue() >= -PHYSICALITY_TOL
    }

    /// Congruence `S sigma S^T`. Physicality is not re-checked since `S` may
    /// be a truncated (approximately symplectic) transformation.
    pub fn transform(&self, s: &SymplecticMatrix) -> Result<Self> {
        if s.dim() != self.data.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.data.nrows(),
                found: s.dim(),
            });
        }
        let out = &s.data * &self.data * s.data.transpose();
        Ok(Self {
            data: 0.5 * (&out + out.transpose()),
        })
    }
}

/// Real `2n x 2n` matrix acting on quadratures by congruence.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    data: DMatrix<f64>,
}

impl SymplecticMatrix {
    /// Wraps a matrix, checking `S Omega S^T = Omega` to within `tol`.
    pub fn new(data: DMatrix<f64>, tol: f64) -> Result<Self> {
        let s = Self::from_unchecked(data)?;
        let defect = s.symplectic_defect();
        if defect > tol {
            return Err(Error::Domain(format!(
                "matrix is not symplectic: |S Omega S^T - Omega|_max = {defect:.3e} > {tol:.1e}"
            )));
        }
        Ok(s)
    }

    pub(crate) fn from_unchecked(data: DMatrix<f64>) -> Result<Self> {
        if data.nrows() != data.ncols() || data.nrows() % 2 != 0 {
            return Err(Error::Domain(format!(
                "symplectic matrix must be 2n x 2n, got {} x {}",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(Self { data })
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            data: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// Independent phase rotation on each mode.
    pub fn phase_rotation(angles: &[f64]) -> Self {
        let mut data = DMatrix::zeros(2 * angles.len(), 2 * angles.len());
        for (j, &theta) in angles.iter().enumerate() {
            data.fixed_view_mut::<2, 2>(2 * j, 2 * j)
                .copy_from(&rotation_block(theta));
        }
        Self { data }
    }

    /// Single-mode squeezer `diag(e^{-s}, e^{s})` on mode `mode` of `n_modes`.
    pub fn single_mode_squeezer(n_modes: usize, mode: usize, s: f64) -> Self {
        let mut data = DMatrix::identity(2 * n_modes, 2 * n_modes);
        data[(2 * mode, 2 * mode)] = (-s).exp();
        data[(2 * mode + 1, 2 * mode + 1)] = s.exp();
        Self { data }
    }

    /// Block-diagonal `self (+) other`.
    pub fn direct_sum(&self, other: &SymplecticMatrix) -> Self {
        let (a, b) = (self.dim(), other.dim());
        let mut data = DMatrix::zeros(a + b, a + b);
        data.view_mut((0, 0), (a, a)).copy_from(&self.data);
        data.view_mut((a, a), (b, b)).copy_from(&other.data);
        Self { data }
    }

    /// `self * other`.
    pub fn compose(&self, other: &SymplecticMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            data: &self.data * &other.data,
        })
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_modes(&self) -> usize {
        self.data.nrows() / 2
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// `max |S Omega S^T - Omega|`.
    pub fn symplectic_defect(&self) -> f64 {
        let omega = symplectic_form(self.n_modes());
        (&self.data * &omega * self.data.transpose() - omega).amax()
    }
}

/// Two-mode squeezed vacuum with squeezing `r`.
///
/// Blocks `A = B = cosh(2r) I` and `C = sinh(2r) diag(-1, 1)`; the sign of `C`
/// is the one for which the standard teleportation combination
/// `N = ZAZ + ZC + C^T Z + B` reaches `F = 1/(1 + e^{-2r})` without extra
/// local rotations.
pub fn make_two_mode_squeezed(r: f64) -> Result<CovarianceMatrix> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "squeezing must be finite and non-negative, got {r}"
        )));
    }
    let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let data = DMatrix::from_row_slice(
        4,
        4,
        &[
            c, 0.0, -s, 0.0, //
            0.0, c, 0.0, s, //
            -s, 0.0, c, 0.0, //
            0.0, s, 0.0, c,
        ],
    );
    Ok(CovarianceMatrix { data })
}

/// Places a two-mode state into a register of Alice's single mode (slot 0)
/// followed by `n_rob_modes` cavity modes of Rob (slots `1..=n_rob_modes`).
/// The second mode of `sigma2` lands on slot `rob_mode` (1-based cavity mode
/// number); every other Rob mode is left in vacuum.
pub fn embed_with_vacuum(
    sigma2: &CovarianceMatrix,
    rob_mode: usize,
    n_rob_modes: usize,
) -> Result<CovarianceMatrix> {
    if sigma2.n_modes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: sigma2.data.nrows(),
        });
    }
    if rob_mode == 0 || rob_mode > n_rob_modes {
        return Err(Error::ModeOutOfRange {
            index: rob_mode,
            n_modes: n_rob_modes,
        });
    }
    let mut out = CovarianceMatrix::vacuum(1 + n_rob_modes).data;
    let slots = [0, rob_mode];
    for (a, &sa) in slots.iter().enumerate() {
        for (b, &sb) in slots.iter().enumerate() {
            out.fixed_view_mut::<2, 2>(2 * sa, 2 * sb)
                .copy_from(&sigma2.block(a, b));
        }
    }
    Ok(CovarianceMatrix { data: out })
}

/// Principal submatrix on the given register slots, in the order given.
pub fn reduce(sigma: &CovarianceMatrix, modes: &[usize]) -> Result<CovarianceMatrix> {
    let n = sigma.n_modes();
    for (i, &m) in modes.iter().enumerate() {
        if m >= n {
            return Err(Error::ModeOutOfRange {
                index: m,
                n_modes: n,
            });
        }
        if modes[..i].contains(&m) {
            return Err(Error::DuplicateMode(m));
        }
    }
    if modes.is_empty() {
        return Err(Error::Domain("no modes selected".into()));
    }
    let mut out = DMatrix::zeros(2 * modes.len(), 2 * modes.len());
    for (a, &ma) in modes.iter().enumerate() {
        for (b, &mb) in modes.iter().enumerate() {
            out.fixed_view_mut::<2, 2>(2 * a, 2 * b)
                .copy_from(&sigma.block(ma, mb));
        }
    }
    Ok(CovarianceMatrix { data: out })
}

/// Phase rotations `(theta_a, theta_b)` on a two-mode register.
pub fn local_rotation(theta_a: f64, theta_b: f64) -> SymplecticMatrix {
    SymplecticMatrix::phase_rotation(&[theta_a, theta_b])
}

/// Partial transpose of a two-mode state: flips the sign of the momentum
/// quadrature of mode `which` (0 or 1).
pub fn partial_transpose(sigma: &CovarianceMatrix, which: usize) -> Result<DMatrix<f64>> {
    if sigma.n_modes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: sigma.data.nrows(),
        });
    }
    if which > 1 {
        return Err(Error::ModeOutOfRange {
            index: which,
            n_modes: 2,
        });
    }
    let flip = 2 * which + 1;
    let mut out = sigma.data.clone();
    for k in 0..4 {
        if k != flip {
            out[(flip, k)] = -out[(flip, k)];
            out[(k, flip)] = -out[(k, flip)];
        }
    }
    Ok(out)
}

/// Symplectic spectrum of a real symmetric positive-definite `2n x 2n` matrix,
/// ascending.
///
/// With `M = K^2`, the matrix `(K Omega K)(K Omega K)^T` is symmetric and has
/// the squared symplectic eigenvalues as doubly degenerate eigenvalues.
pub fn symplectic_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() || m.nrows() % 2 != 0 || m.nrows() == 0 {
        return Err(Error::Domain(format!(
            "expected a 2n x 2n matrix, got {} x {}",
            m.nrows(),
            m.ncols()
        )));
    }
    let asym = relative_asymmetry(m);
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let sym = 0.5 * (m + m.transpose());
    let eig = SymmetricEigen::new(sym);
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::NotPositiveDefinite);
    }
    let sqrt_vals = eig.eigenvalues.map(f64::sqrt);
    let k = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let omega = symplectic_form(m.nrows() / 2);
    let kok = &k * omega * &k;
    let h = &kok * kok.transpose();
    let h = 0.5 * (&h + h.transpose());
    let mut squares: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().cloned().collect();
    squares.sort_by(|a, b| a.total_cmp(b));
    let mut nus = Vec::with_capacity(squares.len() / 2);
    for pair in squares.chunks(2) {
        let mismatch = (pair[0] - pair[1]).abs() / pair[1].abs().max(1.0);
        if mismatch > PAIRING_TOL {
            return Err(Error::SpectrumPairing(mismatch));
        }
        nus.push((0.5 * (pair[0] + pair[1])).max(0.0).sqrt());
    }
    Ok(nus)
}

fn check_two_mode_physical(sigma: &CovarianceMatrix) -> Result<()> {
    if sigma.n_modes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: sigma.data.nrows(),
        });
    }
    let min_eig = sigma.heisenberg_min_eigenvalue();
    if min_eig < -PHYSICALITY_TOL {
        return Err(Error::Unphysical {
            min_eigenvalue: min_eig,
        });
    }
    Ok(())
}

/// The matrix `N = ZAZ + ZC + C^T Z + B` with `Z = diag(1, -1)`.
pub fn teleportation_noise_matrix(sigma: &CovarianceMatrix) -> Matrix2<f64> {
    let z = Matrix2::new(1.0, 0.0, 0.0, -1.0);
    let (a, b, c) = (sigma.block(0, 0), sigma.block(1, 1), sigma.block(0, 1));
    z * a * z + z * c + c.transpose() * z + b
}

/// Coherent-state teleportation fidelity with Alice on mode 0 and Rob on mode 1:
/// `F = 2 / sqrt(det(2I + N)) = 2 / sqrt(4 + 2 Tr N + det N)`.
pub fn teleport_fidelity(sigma: &CovarianceMatrix) -> Result<f64> {
    check_two_mode_physical(sigma)?;
    let n = teleportation_noise_matrix(sigma);
    Ok(2.0 / (Matrix2::identity() * 2.0 + n).determinant().sqrt())
}

/// The alternative coefficient placement `2 / sqrt(4 + Tr N + 2 det N)`.
///
/// Kept for comparison only: in the unit-vacuum convention it does not
/// reproduce `1/(1 + e^{-2r})` for the two-mode squeezed state.
pub fn teleport_fidelity_alt_placement(sigma: &CovarianceMatrix) -> Result<f64> {
    check_two_mode_physical(sigma)?;
    let n = teleportation_noise_matrix(sigma);
    Ok(2.0 / (4.0 + n.trace() + 2.0 * n.determinant()).sqrt())
}

/// Smallest symplectic eigenvalue of the partial transpose.
pub fn partial_transpose_nu(sigma: &CovarianceMatrix) -> Result<f64> {
    check_two_mode_physical(sigma)?;
    let pt = partial_transpose(sigma, 1)?;
    Ok(symplectic_eigenvalues(&pt)?[0])
}

/// Upper bound `1/(1 + nu)` on the optimal fidelity under Gaussian LOCC.
pub fn optimal_fidelity_bound(sigma: &CovarianceMatrix) -> Result<f64> {
    Ok(1.0 / (1.0 + partial_transpose_nu(sigma)?))
}
