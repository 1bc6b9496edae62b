//! Teleportation fidelity between Alice's inertial mode `k` and Rob's moving
//! cavity mode `kp`: exact numeric pipeline, phase-corrected variant, the
//! entanglement bound and the second-order expansion in `h`.

use nalgebra::DMatrix;

use crate::bogoliubov::geometry::CavityGeometry;
use crate::bogoliubov::perturbative::{check_truncation, f_sums, FSums, RichardsonLadder};
use crate::bogoliubov::OracleCache;
use crate::error::{Error, Result};
use crate::gaussian::{
    embed_with_vacuum, local_rotation, make_two_mode_squeezed, partial_transpose_nu, reduce, teleport_fidelity,
    CovarianceMatrix, SymplecticMatrix, PHYSICALITY_TOL,
};
use crate::trajectory::{AliceClock, PhasePair, Segment, Trajectory};

/// Slack allowed when comparing a fidelity with the bound `1/(1 + nu)`.
pub const ORDERING_TOL: f64 = 1e-9;

/// Reduced states violating the uncertainty relation by more than this
/// multiple of the truncation defect are rejected instead of clamped.
pub const CLAMP_DEFECT_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    /// Squeezing of the shared resource.
    pub r: f64,
    /// Alice's mode (1-based).
    pub k: usize,
    /// Rob's cavity mode (1-based).
    pub kp: usize,
    pub geometry: CavityGeometry,
    pub clock: AliceClock,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        Self {
            r: 0.5,
            k: 1,
            kp: 3,
            geometry: CavityGeometry::circuit_qed(),
            clock: AliceClock::Coordinate,
        }
    }
}

impl ProtocolParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.r >= 0.0) || !self.r.is_finite() {
            return Err(Error::Domain(format!("squeezing must be finite and non-negative, got {}", self.r)));
        }
        if self.k == 0 {
            return Err(Error::Domain("Alice's mode index starts at 1".into()));
        }
        check_truncation(self.kp, self.geometry.n_max)
    }

    /// `1 / (1 + e^{-2r})`.
    pub fn rest_fidelity(&self) -> f64 {
        1.0 / (1.0 + (-2.0 * self.r).exp())
    }
}

/// Zeroth-order fidelity for total free phase `phi`.
pub fn unperturbed_fidelity(r: f64, phi: f64) -> f64 {
    1.0 / (1.0 + (2.0 * r).cosh() - phi.cos() * (2.0 * r).sinh())
}

/// Weight of `f_alpha` relative to `f_beta` in the second-order coefficient.
///
/// Mode mixing through `alpha` acts on Rob's mode like a pure-loss channel of
/// strength `2 f_alpha h^2`, which degrades `nu` by `f_alpha h^2 (1 - e^{-2r})`;
/// the `beta` part acts as an amplifier and contributes `f_beta h^2 (1 + e^{-2r})`.
/// Their ratio is `tanh r`.
pub fn alpha_weight(r: f64) -> f64 {
    r.tanh()
}

/// Second-order expansion `F0 - F2 h^2` of the uncorrected fidelity with
/// `F2 = F0^2 (1 + e^{-2r}) (f_beta + f_alpha tanh r)`.
pub fn perturbative_fidelity(r: f64, phi: f64, f_alpha: f64, f_beta: f64, h: f64) -> f64 {
    perturbative_fidelity_weighted(r, phi, f_beta + f_alpha * alpha_weight(r), h)
}

/// Second-order expansion of the optimal (phase-corrected) fidelity,
/// `F0 (1 - (f_beta + f_alpha tanh r) h^2)`.
pub fn perturbative_optimal(r: f64, f_alpha: f64, f_beta: f64, h: f64) -> f64 {
    perturbative_optimal_weighted(r, f_beta + f_alpha * alpha_weight(r), h)
}

/// [`perturbative_fidelity`] with `tanh 2r` as the weight of `f_alpha`.
/// Kept for comparison: it does not match the exact pipeline at order `h^2`.
pub fn perturbative_fidelity_tanh2r(r: f64, phi: f64, f_alpha: f64, f_beta: f64, h: f64) -> f64 {
    perturbative_fidelity_weighted(r, phi, f_beta + f_alpha * (2.0 * r).tanh(), h)
}

/// [`perturbative_optimal`] with `tanh 2r` as the weight of `f_alpha`.
pub fn perturbative_optimal_tanh2r(r: f64, f_alpha: f64, f_beta: f64, h: f64) -> f64 {
    perturbative_optimal_weighted(r, f_beta + f_alpha * (2.0 * r).tanh(), h)
}

fn perturbative_fidelity_weighted(r: f64, phi: f64, weight: f64, h: f64) -> f64 {
    let f0 = unperturbed_fidelity(r, phi);
    f0 - f0 * f0 * (1.0 + (-2.0 * r).exp()) * weight * h * h
}

fn perturbative_optimal_weighted(r: f64, weight: f64, h: f64) -> f64 {
    let f0 = 1.0 / (1.0 + (-2.0 * r).exp());
    f0 - f0 * weight * h * h
}

/// Reduced two-mode state after the motion, with the phases and truncation
/// quality that produced it.
#[derive(Debug, Clone)]
pub struct TransformedState {
    pub sigma: CovarianceMatrix,
    pub phases: PhasePair,
    pub truncation_defect: f64,
    /// Shift added to restore the uncertainty relation (0 if none was needed).
    pub clamp: f64,
}

impl TransformedState {
    /// Same state with the free phases undone by local rotations.
    pub fn corrected(&self) -> Result<CovarianceMatrix> {
        self.sigma
            .transform(&local_rotation(-self.phases.theta_alice, -self.phases.theta_rob))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    pub f_raw: f64,
    pub f_corrected: f64,
    pub f_opt_numeric: f64,
    pub f_pert: f64,
    pub f_pert_opt: f64,
    pub nu: f64,
    pub phi: f64,
    pub h: f64,
    /// `|f_corrected - f_pert_opt|`.
    pub residual_pert: f64,
    pub f_sums: FSums,
    pub truncation_defect: f64,
}

/// Parameters together with the coefficient cache they share across runs.
#[derive(Debug)]
pub struct Protocol {
    params: ProtocolParams,
    cache: OracleCache,
    ladder: RichardsonLadder,
    resource: CovarianceMatrix,
}

impl Protocol {
    pub fn new(params: ProtocolParams) -> Result<Self> {
        Self::with_ladder(params, RichardsonLadder::default())
    }

    pub fn with_ladder(params: ProtocolParams, ladder: RichardsonLadder) -> Result<Self> {
        params.validate()?;
        let tms = make_two_mode_squeezed(params.r)?;
        let resource = embed_with_vacuum(&tms, params.kp, params.geometry.n_max)?;
        Ok(Self {
            cache: OracleCache::new(params.geometry),
            params,
            ladder,
            resource,
        })
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    pub fn cache(&self) -> &OracleCache {
        &self.cache
    }

    pub fn ladder(&self) -> &RichardsonLadder {
        &self.ladder
    }

    /// Applies the motion to the shared state and keeps modes `(k, kp)`.
    pub fn transformed_state(&self, trajectory: &Trajectory) -> Result<TransformedState> {
        let p = &self.params;
        let phases = trajectory.phase_pair(p.k, p.kp, p.clock);
        let transform = trajectory.build_transform(&self.cache)?;
        let s = SymplecticMatrix::phase_rotation(&[phases.theta_alice]).direct_sum(&transform.to_symplectic());
        let full = self.resource.transform(&s)?;
        let reduced = reduce(&full, &[0, p.kp])?;
        let defect = transform.truncation_defect;
        let (sigma, clamp) = clamp_physical(reduced, defect)?;
        Ok(TransformedState {
            sigma,
            phases,
            truncation_defect: defect,
            clamp,
        })
    }

    pub fn fidelity_raw(&self, trajectory: &Trajectory) -> Result<f64> {
        teleport_fidelity(&self.transformed_state(trajectory)?.sigma)
    }

    pub fn fidelity_corrected(&self, trajectory: &Trajectory) -> Result<f64> {
        teleport_fidelity(&self.transformed_state(trajectory)?.corrected()?)
    }

    /// `(1/(1 + nu), nu)` for the transformed state.
    pub fn fidelity_optimal(&self, trajectory: &Trajectory) -> Result<(f64, f64)> {
        let nu = partial_transpose_nu(&self.transformed_state(trajectory)?.sigma)?;
        Ok((1.0 / (1.0 + nu), nu))
    }

    /// f-sums of Rob's mode for this trajectory.
    pub fn f_sums(&self, trajectory: &Trajectory) -> Result<FSums> {
        check_truncation(self.params.kp, self.params.geometry.n_max)?;
        match trajectory.segments() {
            [Segment::Accelerated { tau_s, .. }] => f_sums(self.params.kp, *tau_s, &self.cache, &self.ladder),
            _ => Ok(FSums::from_first_order(
                &trajectory.first_order_transform(&self.cache, &self.ladder)?,
                self.params.kp,
            )),
        }
    }

    pub fn consistency_report(&self, trajectory: &Trajectory) -> Result<FidelityReport> {
        let state = self.transformed_state(trajectory)?;
        let f_raw = teleport_fidelity(&state.sigma)?;
        let f_corrected = teleport_fidelity(&state.corrected()?)?;
        let nu = partial_transpose_nu(&state.sigma)?;
        let f_opt_numeric = 1.0 / (1.0 + nu);
        let sums = self.f_sums(trajectory)?;
        let h = trajectory.max_h();
        let r = self.params.r;
        let phi = state.phases.phi;
        let f_pert = perturbative_fidelity(r, phi, sums.f_alpha, sums.f_beta, h);
        let f_pert_opt = perturbative_optimal(r, sums.f_alpha, sums.f_beta, h);
        for (name, f) in [("raw", f_raw), ("corrected", f_corrected)] {
            if f > f_opt_numeric + ORDERING_TOL {
                return Err(Error::Domain(format!(
                    "{name} fidelity {f:.12} exceeds the bound {f_opt_numeric:.12} (truncation defect {:.3e})",
                    state.truncation_defect
                )));
            }
        }
        Ok(FidelityReport {
            f_raw,
            f_corrected,
            f_opt_numeric,
            f_pert,
            f_pert_opt,
            nu,
            phi,
            h,
            residual_pert: (f_corrected - f_pert_opt).abs(),
            f_sums: sums,
            truncation_defect: state.truncation_defect,
        })
    }
}

/// Restores `sigma + i Omega >= 0` by a uniform diagonal shift when the
/// violation is attributable to truncation.
fn clamp_physical(sigma: CovarianceMatrix, defect: f64) -> Result<(CovarianceMatrix, f64)> {
    let min_eig = sigma.heisenberg_min_eigenvalue();
    if min_eig >= -PHYSICALITY_TOL {
        return Ok((sigma, 0.0));
    }
    if -min_eig > CLAMP_DEFECT_FACTOR * defect {
        return Err(Error::Unphysical { min_eigenvalue: min_eig });
    }
    log::debug!("reduced state violates the uncertainty relation by {:.3e}; clamped", -min_eig);
    let n = sigma.data().nrows();
    let shifted = sigma.into_inner() + DMatrix::identity(n, n) * (-min_eig);
    Ok((CovarianceMatrix::new(shifted)?, -min_eig))
}
