//! Klein-Gordon box modes of the massless field, in units `L = c = 1`.
//!
//! Inertial modes `u_n = sin(n pi xi) e^{-i n pi t} / sqrt(n pi)` and Rindler
//! modes `u^_n = sin(Omega_n ln(chi/chi_near)) e^{-i Omega_n eta} / sqrt(n pi)`
//! are both unit-normalized in the Klein-Gordon inner product.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::geometry::{CavityGeometry, RindlerGeometry};
use crate::error::{Error, Result};

/// Mode value and its derivative with respect to the chart time, on the
/// `t = 0` (resp. `eta = 0`) slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeValue {
    pub value: Complex64,
    pub time_derivative: Complex64,
}

pub(crate) fn normalization(n: usize) -> f64 {
    1.0 / (n as f64 * PI).sqrt()
}

/// Inertial mode `n` at `position_m` metres from the left wall. The time
/// derivative is per unit `L/c`.
pub fn mode_function_inertial(n: usize, position_m: f64, geometry: &CavityGeometry) -> Result<ModeValue> {
    if n == 0 {
        return Err(Error::Domain("mode numbers start at 1".into()));
    }
    if !(0.0..=geometry.length_m).contains(&position_m) {
        return Err(Error::Domain(format!(
            "position {position_m} m outside cavity [0, {}]",
            geometry.length_m
        )));
    }
    let xi = position_m / geometry.length_m;
    let omega = n as f64 * PI;
    let v = normalization(n) * (omega * xi).sin();
    Ok(ModeValue {
        value: Complex64::new(v, 0.0),
        time_derivative: Complex64::new(0.0, -omega * v),
    })
}

/// Rindler mode `n` at Rindler position `chi` (units of `L`). The time
/// derivative is with respect to Rindler time `eta`.
pub fn mode_function_rindler(n: usize, chi: f64, rindler: &RindlerGeometry) -> Result<ModeValue> {
    if n == 0 {
        return Err(Error::Domain("mode numbers start at 1".into()));
    }
    if !(rindler.chi_near..=rindler.chi_far).contains(&chi) {
        return Err(Error::Domain(format!(
            "chi = {chi} outside cavity [{}, {}]",
            rindler.chi_near, rindler.chi_far
        )));
    }
    let big_omega = rindler.rindler_frequency(n);
    let s = ((chi - rindler.chi_near) / rindler.chi_near).ln_1p();
    let v = normalization(n) * (big_omega * s).sin();
    Ok(ModeValue {
        value: Complex64::new(v, 0.0),
        time_derivative: Complex64::new(0.0, -big_omega * v),
    })
}
