//! Non-perturbative sudden-switch coefficients from mode overlaps.
//!
//! On the shared slice `t = eta = 0` the inertial cavity occupies
//! `x in [chi_near, chi_far]` and `d/dt = (1/chi) d/deta`, so the Klein-Gordon
//! inner products reduce to real integrals over the fractional position `xi`:
//!
//! ```text
//! alpha_mn =  (u^_m, u_n)  = int (n pi + Omega_m / chi) U_m(xi) V_n(xi) dxi
//! beta_mn  = -(u^_m, u_n*) = int (n pi - Omega_m / chi) U_m(xi) V_n(xi) dxi
//! ```
//!
//! with `U_m`, `V_n` the normalized spatial profiles of the Rindler and
//! inertial modes.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::geometry::{CavityGeometry, RindlerGeometry};
use super::modes::normalization;
use super::pair::BogoliubovPair;
use crate::error::Result;
use crate::quadrature::{integrate, QuadratureOptions};

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub quadrature: QuadratureOptions,
}

impl OracleOptions {
    pub fn for_geometry(geometry: &CavityGeometry) -> Self {
        Self {
            quadrature: QuadratureOptions {
                abs_tol: 1e-12,
                max_panels: 1 << 14,
                initial_panels: 2 * geometry.n_max,
            },
        }
    }
}

/// Coefficients for switching the acceleration on from rest with `h = aL/c^2`
/// (negative `h` accelerates towards `-x`).
pub fn sudden_switch_oracle(h: f64, geometry: &CavityGeometry) -> Result<BogoliubovPair> {
    sudden_switch_oracle_with(h, geometry, &OracleOptions::for_geometry(geometry))
}

pub fn sudden_switch_oracle_with(h: f64, geometry: &CavityGeometry, options: &OracleOptions) -> Result<BogoliubovPair> {
    let rindler = RindlerGeometry::new(h)?;
    let n = geometry.n_max;
    // For h < 0 the Rindler profiles are measured from the opposite wall;
    // the factor (-1)^(m+1) keeps alpha_mm -> +1 as h -> 0 from either side.
    let rindler_norms: Vec<f64> = (1..=n)
        .map(|m| {
            let sign = if rindler.is_mirrored() && m % 2 == 0 { -1.0 } else { 1.0 };
            sign * normalization(m)
        })
        .collect();
    let norms: Vec<f64> = (1..=n).map(normalization).collect();
    let big_omegas: Vec<f64> = (1..=n).map(|m| rindler.rindler_frequency(m)).collect();
    let integrand = |xi: f64, out: &mut [f64]| {
        let s = rindler.log_coordinate(xi);
        let chi = rindler.chi_at(xi);
        for m in 0..n {
            let u = rindler_norms[m] * (big_omegas[m] * s).sin();
            let w = big_omegas[m] / chi;
            for k in 0..n {
                let omega = (k + 1) as f64 * PI;
                let v = norms[k] * (omega * xi).sin();
                out[m * n + k] = (omega + w) * u * v;
                out[n * n + m * n + k] = (omega - w) * u * v;
            }
        }
    };
    let res = integrate(integrand, 0.0, 1.0, 2 * n * n, &options.quadrature)?;
    let alpha = DMatrix::from_fn(n, n, |m, k| Complex64::new(res.values[m * n + k], 0.0));
    let beta = DMatrix::from_fn(n, n, |m, k| Complex64::new(res.values[n * n + m * n + k], 0.0));
    BogoliubovPair::new(alpha, beta)
}

/// Memoized oracle evaluations for one geometry, keyed by the exact bits of `h`.
#[derive(Debug)]
pub struct OracleCache {
    geometry: CavityGeometry,
    options: OracleOptions,
    entries: Mutex<HashMap<u64, Arc<BogoliubovPair>>>,
}

impl OracleCache {
    pub fn new(geometry: CavityGeometry) -> Self {
        Self::with_options(geometry, OracleOptions::for_geometry(&geometry))
    }

    pub fn with_options(geometry: CavityGeometry, options: OracleOptions) -> Self {
        Self {
            geometry,
            options,
            entries: Mutex::new(HashMap::new()),
        }
    }

    pub fn geometry(&self) -> &CavityGeometry {
        &self.geometry
    }

    pub fn get(&self, h: f64) -> Result<Arc<BogoliubovPair>> {
        let key = h.to_bits();
        if let Some(hit) = self.entries.lock().expect("oracle cache poisoned").get(&key) {
            return Ok(Arc::clone(hit));
        }
        // computed outside the lock; a concurrent duplicate yields identical bits
        let pair = Arc::new(sudden_switch_oracle_with(h, &self.geometry, &self.options)?);
        let mut entries = self.entries.lock().expect("oracle cache poisoned");
        Ok(Arc::clone(entries.entry(key).or_insert(pair)))
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("oracle cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest truncation defect among cached entries.
    pub fn worst_defect(&self) -> f64 {
        self.entries
            .lock()
            .expect("oracle cache poisoned")
            .values()
            .map(|p| p.truncation_defect)
            .fold(0.0, f64::max)
    }
}
