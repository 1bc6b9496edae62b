//! Fidelity of continuous-variable teleportation when the receiver's cavity
//! moves along a piecewise trajectory of inertial and uniformly accelerated
//! segments.

pub mod bogoliubov;
pub mod error;
pub mod gaussian;
pub mod protocol;
pub mod quadrature;
pub mod runner;
pub mod trajectory;

pub use error::{Error, Result};
