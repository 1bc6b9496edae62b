//! Self-check suite behind the `validate` subcommand.

use std::f64::consts::PI;

use super::coeffs::EVEN_PARITY_TOL;
use crate::bogoliubov::geometry::CavityGeometry;
use crate::bogoliubov::pair::BogoliubovPair;
use crate::bogoliubov::perturbative::{check_truncation, sudden_switch_perturbative, RichardsonLadder, ANSATZ_TOL};
use crate::bogoliubov::OracleCache;
use crate::error::Result;
use crate::protocol::{unperturbed_fidelity, FidelityReport, Protocol, ProtocolParams};
use crate::trajectory::{acceleration_for_h, Segment, Trajectory};

/// `h` at which the oracle health checks run (`h^2 ~ 0.06`).
pub const HEALTH_H: f64 = 0.245;
/// Accepted range for successive residual ratios under `h` halving (ideal 16).
pub const HALVING_RATIO_RANGE: (f64, f64) = (10.0, 22.0);
pub const ORDER_CHECK_H: [f64; 3] = [0.2, 0.1, 0.05];

/// Identity-residual bound for a truncation.
pub fn defect_bound(n_max: usize) -> f64 {
    if n_max >= 20 {
        1e-4
    } else {
        1e-3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidateOptions {
    pub n_max: usize,
    /// Test hook: negate the `beta` column of mode 1 before the oracle checks.
    pub flip_beta: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            n_max: 10,
            flip_beta: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationSummary {
    pub checks: Vec<Check>,
}

impl ValidationSummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    fn record(&mut self, name: &'static str, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check { name, passed, detail });
    }
}

/// `values[i] / values[i + 1]` for a sequence measured at halved steps.
pub fn halving_ratios(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| w[0] / w[1]).collect()
}

pub fn ratios_in_range(ratios: &[f64]) -> bool {
    ratios
        .iter()
        .all(|r| *r >= HALVING_RATIO_RANGE.0 && *r <= HALVING_RATIO_RANGE.1)
}

/// Reports for one accelerated interval of duration `tau_s` at each `h`.
pub fn reports_at(protocol: &Protocol, tau_s: f64, hs: &[f64]) -> Result<Vec<FidelityReport>> {
    let g = protocol.params().geometry;
    hs.iter()
        .map(|&h| {
            let a = acceleration_for_h(h, g.length_m, g.c_m_per_s);
            protocol.consistency_report(&Trajectory::single_acceleration(a, tau_s, g)?)
        })
        .collect()
}

fn flip_first_beta_column(pair: &BogoliubovPair) -> Result<BogoliubovPair> {
    let mut beta = pair.beta.clone();
    beta.column_mut(0).neg_mut();
    BogoliubovPair::new(pair.alpha.clone(), beta)
}

pub fn run_validation(opts: &ValidateOptions) -> ValidationSummary {
    let mut s = ValidationSummary::default();
    let geometry = CavityGeometry::circuit_qed().with_n_max(opts.n_max);
    let params = ProtocolParams {
        geometry,
        ..ProtocolParams::default()
    };
    let bound = defect_bound(opts.n_max);
    let ladder = RichardsonLadder::default();
    let cache = OracleCache::new(geometry);

    s.record(
        "truncation adequacy",
        check_truncation(params.kp, opts.n_max).map(|_| (true, format!("kp = {} resolved by n_max = {}", params.kp, opts.n_max))),
    );

    let health = cache.get(HEALTH_H).and_then(|p| {
        if opts.flip_beta {
            flip_first_beta_column(&p)
        } else {
            Ok((*p).clone())
        }
    });
    s.record(
        "bogoliubov identities",
        health.as_ref().map_err(Clone::clone).map(|p| {
            (p.truncation_defect <= bound, format!("residual {:.3e} (bound {bound:.0e})", p.truncation_defect))
        }),
    );
    s.record(
        "symplecticity",
        health.as_ref().map_err(Clone::clone).map(|p| {
            let sym = p.to_symplectic();
            let omega = crate::gaussian::symplectic_form(p.n_modes());
            let d = sym.data() * &omega * sym.data().transpose() - omega;
            let k = 2 * p.trusted_modes();
            let worst = d.view((0, 0), (k, k)).amax();
            (worst <= bound, format!("trusted-block defect {worst:.3e} (bound {bound:.0e})"))
        }),
    );

    let first = sudden_switch_perturbative(&cache, &ladder);
    s.record(
        "first-order parity",
        first.as_ref().map_err(Clone::clone).map(|c| {
            let worst = c.even_parity_max();
            (worst < EVEN_PARITY_TOL, format!("max |coefficient| with m+n even {worst:.3e}"))
        }),
    );
    s.record(
        "closed-form first order",
        first.as_ref().map_err(Clone::clone).map(|c| {
            (
                c.ansatz_matches(),
                format!("worst relative mismatch {:.3e} (tolerance {ANSATZ_TOL})", c.ansatz_mismatch),
            )
        }),
    );

    let protocol = Protocol::new(params);
    let protocol = match protocol {
        Ok(p) => p,
        Err(e) => {
            s.record("protocol setup", Err(e));
            return s;
        }
    };

    s.record(
        "rest anchor",
        protocol
            .consistency_report(&Trajectory::at_rest(geometry))
            .map(|r| {
                let target = params.rest_fidelity();
                let worst = [r.f_raw, r.f_corrected, r.f_opt_numeric]
                    .iter()
                    .map(|f| (f - target).abs())
                    .fold(0.0, f64::max);
                (worst < 1e-6, format!("max deviation {worst:.3e}"))
            }),
    );

    s.record("zeroth-order closed form", zeroth_order_check(&params));

    let period = geometry.fundamental_period_s();
    s.record(
        "order h^4 at one period",
        reports_at(&protocol, period, &ORDER_CHECK_H).map(|reps| {
            let res: Vec<f64> = reps.iter().map(|r| (r.f_raw - r.f_pert).abs()).collect();
            let ratios = halving_ratios(&res);
            (ratios_in_range(&ratios), format!("|F_raw - F_pert| halving ratios {ratios:.2?}"))
        }),
    );
    s.record(
        "order h^4 of corrected fidelity",
        reports_at(&protocol, 0.3 * period, &ORDER_CHECK_H).map(|reps| {
            let res: Vec<f64> = reps.iter().map(|r| r.residual_pert).collect();
            let ratios = halving_ratios(&res);
            (ratios_in_range(&ratios), format!("residual_pert halving ratios {ratios:.2?}"))
        }),
    );
    s.record(
        "optimality coincidence",
        reports_at(&protocol, 0.3 * period, &ORDER_CHECK_H).map(|reps| {
            let res: Vec<f64> = reps.iter().map(|r| (r.f_corrected - r.f_opt_numeric).abs()).collect();
            let ratios = halving_ratios(&res);
            (ratios_in_range(&ratios), format!("|F_corrected - F_opt| halving ratios {ratios:.2?}"))
        }),
    );
    s
}

/// Inertial trajectories on a deterministic `(r, phi)` lattice against the
/// zeroth-order closed form.
fn zeroth_order_check(params: &ProtocolParams) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        let r = 0.4 * i as f64;
        let protocol = Protocol::new(ProtocolParams { r, ..*params })?;
        for j in 0..12 {
            let phi = 2.0 * PI * j as f64 / 12.0;
            let g = params.geometry;
            let d = phi / (g.omega(params.k) + g.omega(params.kp));
            let t = Trajectory::new(vec![Segment::Inertial { duration_s: d }], g)?;
            let f = protocol.fidelity_raw(&t)?;
            worst = worst.max((f - unperturbed_fidelity(r, phi)).abs());
        }
    }
    Ok((worst < 1e-9, format!("max deviation {worst:.3e} over 60 points")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        assert_eq!(halving_ratios(&[16.0, 1.0, 0.0625]), vec![16.0, 16.0]);
        assert!(ratios_in_range(&[11.0, 21.0]));
        assert!(!ratios_in_range(&[4.0, 16.0]));
    }

    #[test]
    fn beta_flip_breaks_identities() {
        let cache = OracleCache::new(CavityGeometry::circuit_qed());
        let p = cache.get(HEALTH_H).unwrap();
        let flipped = flip_first_beta_column(&p).unwrap();
        assert!(p.truncation_defect < 1e-3);
        assert!(flipped.truncation_defect > 1e-3, "{}", flipped.truncation_defect);
    }
}
