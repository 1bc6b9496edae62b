use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest `h^2` covered by the reference parameter regime; larger values
/// are accepted with a warning.
pub const H_SQUARED_REGIME: f64 = 0.06;

/// Rigid (1+1)-dimensional Dirichlet cavity.
///
/// Internally lengths are measured in units of `length_m` and times in units
/// of `length_m / c_m_per_s`; in those units the mode frequencies are `n*pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    /// Rest length (m).
    pub length_m: f64,
    /// Propagation speed of the field (m/s).
    pub c_m_per_s: f64,
    /// Number of cavity modes kept.
    pub n_max: usize,
}

impl CavityGeometry {
    pub fn new(length_m: f64, c_m_per_s: f64, n_max: usize) -> Result<Self> {
        if !(length_m > 0.0) || !length_m.is_finite() {
            return Err(Error::Domain(format!("cavity length must be positive, got {length_m}")));
        }
        if !(c_m_per_s > 0.0) || !c_m_per_s.is_finite() {
            return Err(Error::Domain(format!("propagation speed must be positive, got {c_m_per_s}")));
        }
        if n_max == 0 {
            return Err(Error::Domain("n_max must be at least 1".into()));
        }
        Ok(Self {
            length_m,
            c_m_per_s,
            n_max,
        })
    }

    /// The circuit-QED cavity used for the headline plots: 1.2 cm, 1.2e8 m/s, 10 modes.
    pub fn circuit_qed() -> Self {
        Self {
            length_m: 0.012,
            c_m_per_s: 1.2e8,
            n_max: 10,
        }
    }

    pub fn with_n_max(self, n_max: usize) -> Self {
        Self { n_max, ..self }
    }

    /// Angular frequency of mode `n` (rad/s).
    pub fn omega(&self, n: usize) -> f64 {
        n as f64 * PI * self.c_m_per_s / self.length_m
    }

    /// `c / 2L` in Hz.
    pub fn fundamental_frequency_hz(&self) -> f64 {
        self.c_m_per_s / (2.0 * self.length_m)
    }

    /// `2L / c` in seconds.
    pub fn fundamental_period_s(&self) -> f64 {
        2.0 * self.length_m / self.c_m_per_s
    }

    /// Seconds to units of `L/c`.
    pub fn to_natural_time(&self, t_s: f64) -> f64 {
        t_s * self.c_m_per_s / self.length_m
    }

    /// Acceleration (m/s^2) to the dimensionless `h = aL/c^2`.
    pub fn h_for_acceleration(&self, a: f64) -> f64 {
        a * self.length_m / (self.c_m_per_s * self.c_m_per_s)
    }

    /// Highest mode whose truncation is considered adequate.
    pub fn trusted_modes(&self) -> usize {
        self.n_max / 2
    }
}

/// Rindler chart of a rigid cavity whose centre has proper acceleration
/// `h` (units `c^2/L`). Negative `h` describes acceleration towards `-x`; the
/// chart quantities below are then those of the mirrored cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RindlerGeometry {
    pub h: f64,
    /// Centre position `1/|h|`.
    pub chi_center: f64,
    /// Wall nearer the horizon, `1/|h| - 1/2`.
    pub chi_near: f64,
    /// Wall farther from the horizon, `1/|h| + 1/2`.
    pub chi_far: f64,
    /// `ln(chi_far / chi_near) = ln((2+|h|)/(2-|h|))`.
    pub log_width: f64,
}

impl RindlerGeometry {
    pub fn new(h: f64) -> Result<Self> {
        let ah = h.abs();
        if !(ah > 0.0 && ah < 2.0) {
            return Err(Error::Domain(format!("need 0 < |h| < 2, got h = {h}")));
        }
        if h * h > H_SQUARED_REGIME {
            log::debug!("h^2 = {:.6} exceeds {H_SQUARED_REGIME}; higher orders in h are not small", h * h);
        }
        let chi_center = 1.0 / ah;
        let chi_near = chi_center - 0.5;
        Ok(Self {
            h,
            chi_center,
            chi_near,
            chi_far: chi_center + 0.5,
            log_width: (1.0 / chi_near).ln_1p(),
        })
    }

    pub fn is_mirrored(&self) -> bool {
        self.h < 0.0
    }

    /// Rindler frequency `n*pi / log_width`.
    pub fn rindler_frequency(&self, n: usize) -> f64 {
        n as f64 * PI / self.log_width
    }

    /// Phase accumulated by mode `n` over proper time `tau` (units `L/c`) at the
    /// cavity centre: `Omega_n * eta` with `eta = |h| tau`.
    pub fn mode_phase(&self, n: usize, tau: f64) -> f64 {
        n as f64 * PI * tau * (self.h.abs() / self.log_width)
    }

    /// Rindler coordinate of the point at fractional cavity position `xi`
    /// (`xi = 0` at the left wall).
    pub fn chi_at(&self, xi: f64) -> f64 {
        if self.is_mirrored() {
            self.chi_near + (1.0 - xi)
        } else {
            self.chi_near + xi
        }
    }

    /// `ln(chi / chi_near)` at fractional position `xi`.
    pub fn log_coordinate(&self, xi: f64) -> f64 {
        let d = if self.is_mirrored() { 1.0 - xi } else { xi };
        (d / self.chi_near).ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn circuit_qed_numbers() {
        let g = CavityGeometry::circuit_qed();
        assert_abs_diff_eq!(g.fundamental_frequency_hz(), 5e9, epsilon = 1e-3);
        assert_abs_diff_eq!(g.fundamental_period_s(), 2e-10, epsilon = 1e-24);
        assert_abs_diff_eq!(g.omega(3), 3.0 * g.omega(1), epsilon = 1e-3);
        assert_abs_diff_eq!(g.omega(1), 2.0 * PI * 5e9, epsilon = 1e-3);
        assert_eq!(g.trusted_modes(), 5);
    }

    #[test]
    fn geometry_validation() {
        assert!(CavityGeometry::new(0.0, 1.0, 4).is_err());
        assert!(CavityGeometry::new(1.0, -1.0, 4).is_err());
        assert!(CavityGeometry::new(1.0, 1.0, 0).is_err());
        assert!(RindlerGeometry::new(0.0).is_err());
        assert!(RindlerGeometry::new(2.0).is_err());
        assert!(RindlerGeometry::new(-2.5).is_err());
        assert!(RindlerGeometry::new(1.9).is_ok());
    }

    #[test]
    fn rindler_frequencies_approach_minkowski() {
        for h in [0.5, 0.25, 0.1, 0.01] {
            let rg = RindlerGeometry::new(h).unwrap();
            assert_abs_diff_eq!(rg.chi_far - rg.chi_near, 1.0, epsilon = 1e-12);
            for n in 1..=10 {
                let rel = (rg.rindler_frequency(n) * h - n as f64 * PI).abs() / (n as f64 * PI);
                assert!(rel <= h * h / 2.0, "h={h} n={n} rel={rel}");
            }
        }
    }

    #[test]
    fn mirrored_chart() {
        let p = RindlerGeometry::new(0.2).unwrap();
        let m = RindlerGeometry::new(-0.2).unwrap();
        assert_eq!(p.log_width, m.log_width);
        assert_abs_diff_eq!(p.log_coordinate(0.3), m.log_coordinate(0.7), epsilon = 1e-15);
        assert_abs_diff_eq!(m.chi_at(1.0), m.chi_near, epsilon = 1e-15);
        assert_eq!(p.mode_phase(3, 1.7), m.mode_phase(3, 1.7));
    }
}
