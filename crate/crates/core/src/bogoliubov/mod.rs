//! Bogoliubov transformations between inertial and uniformly accelerated
//! rigid-cavity mode bases of a massless Dirichlet field in 1+1 dimensions.

pub mod geometry;
pub mod modes;
pub mod oracle;
pub mod pair;
pub mod perturbative;
pub mod segment;

pub use geometry::{CavityGeometry, RindlerGeometry};
pub use modes::{mode_function_inertial, mode_function_rindler, ModeValue};
pub use oracle::{sudden_switch_oracle, sudden_switch_oracle_with, OracleCache, OracleOptions};
pub use pair::{compose, BogoliubovPair, CMatrix};
pub use perturbative::{
    check_truncation, f_sums, first_order, sudden_switch_perturbative, FSums, FirstOrder,
    PerturbativeCoefficients, RichardsonLadder,
};
pub use segment::one_segment_transform;
