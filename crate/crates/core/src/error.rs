use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("mode index {index} out of range (register has {n_modes} modes)")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("duplicate mode index {0}")]
    DuplicateMode(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (relative asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    /// Heisenberg bound `sigma + i*Omega >= 0` violated.
    #[error("unphysical covariance matrix: min eigenvalue of sigma + i*Omega is {min_eigenvalue:.3e}")]
    Unphysical { min_eigenvalue: f64 },

    #[error("symplectic eigenvalue pairing failed (mismatch {0:.3e})")]
    SpectrumPairing(f64),

    #[error("quadrature did not converge: error estimate {achieved:.3e} after {panels} panels (tolerance {tolerance:.1e})")]
    QuadratureNonConvergence {
        achieved: f64,
        tolerance: f64,
        panels: usize,
    },

    #[error("Richardson extrapolation did not converge: estimate {achieved:.3e}, target {target:.1e}")]
    ExtrapolationNonConvergence { achieved: f64, target: f64 },

    #[error("truncation too small for mode {mode} with n_max = {n_max}: {reason}")]
    TruncationInadequate {
        mode: usize,
        n_max: usize,
        reason: String,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
