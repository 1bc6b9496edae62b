//! Rob's motion as a sequence of inertial and constant-acceleration segments.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::bogoliubov::geometry::{CavityGeometry, H_SQUARED_REGIME};
use crate::bogoliubov::pair::{compose, BogoliubovPair};
use crate::bogoliubov::perturbative::{first_order, FirstOrder, RichardsonLadder};
use crate::bogoliubov::{one_segment_transform, OracleCache};
use crate::error::{Error, Result};

/// `h = a L / c^2`.
pub fn h_parameter(a: f64, length_m: f64, c_m_per_s: f64) -> Result<f64> {
    if !(length_m > 0.0) || !(c_m_per_s > 0.0) {
        return Err(Error::Domain(format!(
            "length and propagation speed must be positive (L = {length_m}, c = {c_m_per_s})"
        )));
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("acceleration must be finite and non-negative, got {a}")));
    }
    let h = a * length_m / (c_m_per_s * c_m_per_s);
    if h * h > H_SQUARED_REGIME {
        log::info!("h^2 = {:.6} lies beyond {H_SQUARED_REGIME}", h * h);
    }
    Ok(h)
}

/// Inverse of [`h_parameter`].
pub fn acceleration_for_h(h: f64, length_m: f64, c_m_per_s: f64) -> f64 {
    h * c_m_per_s * c_m_per_s / length_m
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    /// Coasting for `duration_s` of Rob's proper time.
    Inertial { duration_s: f64 },
    /// Constant proper acceleration `a_m_s2` at the cavity centre for proper
    /// time `tau_s` measured there.
    Accelerated { a_m_s2: f64, tau_s: f64 },
}

impl Segment {
    pub fn proper_duration(&self) -> f64 {
        match *self {
            Segment::Inertial { duration_s } => duration_s,
            Segment::Accelerated { tau_s, .. } => tau_s,
        }
    }

    fn validate(&self, geometry: &CavityGeometry) -> Result<()> {
        let d = self.proper_duration();
        if !(d >= 0.0) || !d.is_finite() {
            return Err(Error::Domain(format!("segment duration must be non-negative, got {d}")));
        }
        if let Segment::Accelerated { a_m_s2, .. } = *self {
            if !(a_m_s2 > 0.0) || !a_m_s2.is_finite() {
                return Err(Error::Domain(format!("acceleration must be positive, got {a_m_s2}")));
            }
            let h = geometry.h_for_acceleration(a_m_s2);
            if h >= 2.0 {
                return Err(Error::Domain(format!("h = {h} >= 2: the near wall would cross the horizon")));
            }
            if h * h > H_SQUARED_REGIME {
                log::debug!("segment with h^2 = {:.6} beyond {H_SQUARED_REGIME}", h * h);
            }
        }
        Ok(())
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Inertial { duration_s } => write!(f, "inertial {duration_s:e}"),
            Segment::Accelerated { a_m_s2, tau_s } => write!(f, "accel {a_m_s2:e} {tau_s:e}"),
        }
    }
}

/// Which clock Alice's phase is referred to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AliceClock {
    /// Lab-frame coordinate time elapsed while Rob moves.
    #[default]
    Coordinate,
    /// Rob's proper time (`t = tau`), for comparison.
    RobProper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    segments: Vec<Segment>,
    geometry: CavityGeometry,
}

impl Trajectory {
    pub fn new(segments: Vec<Segment>, geometry: CavityGeometry) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Domain("a trajectory needs at least one segment".into()));
        }
        for s in &segments {
            s.validate(&geometry)?;
        }
        Ok(Self { segments, geometry })
    }

    /// No motion at all.
    pub fn at_rest(geometry: CavityGeometry) -> Self {
        Self {
            segments: vec![Segment::Inertial { duration_s: 0.0 }],
            geometry,
        }
    }

    /// The single accelerated interval used in the parameter sweeps.
    pub fn single_acceleration(a_m_s2: f64, tau_s: f64, geometry: CavityGeometry) -> Result<Self> {
        Self::new(vec![Segment::Accelerated { a_m_s2, tau_s }], geometry)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn geometry(&self) -> &CavityGeometry {
        &self.geometry
    }

    /// Appends a segment, returning the extended trajectory.
    pub fn then(mut self, segment: Segment) -> Result<Self> {
        segment.validate(&self.geometry)?;
        self.segments.push(segment);
        Ok(self)
    }

    pub fn is_inertial(&self) -> bool {
        self.segments
            .iter()
            .all(|s| matches!(s, Segment::Inertial { .. }))
    }

    /// Largest `h` among accelerated segments (0 for inertial motion).
    pub fn max_h(&self) -> f64 {
        self.segments
            .iter()
            .filter_map(|s| match *s {
                Segment::Accelerated { a_m_s2, .. } => Some(self.geometry.h_for_acceleration(a_m_s2)),
                Segment::Inertial { .. } => None,
            })
            .fold(0.0, f64::max)
    }

    /// Parses the line-oriented description: `inertial <duration_s>` or
    /// `accel <a_m_s2> <tau_s>`, `#` starts a comment. An empty description
    /// means no motion.
    pub fn parse(text: &str, geometry: CavityGeometry) -> Result<Self> {
        let mut segments = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let seg = parse_segment(line).map_err(|message| Error::Parse {
                line: line_no,
                message,
            })?;
            seg.validate(&geometry).map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            segments.push(seg);
        }
        if segments.is_empty() {
            return Ok(Self::at_rest(geometry));
        }
        let t = Self::new(segments, geometry)?;
        t.warn_if_beyond_regime();
        Ok(t)
    }

    /// Logs a warning when some segment has `h^2` above the reference regime.
    pub fn warn_if_beyond_regime(&self) {
        let h = self.max_h();
        if h * h > H_SQUARED_REGIME {
            log::warn!("trajectory reaches h^2 = {:.6} > {H_SQUARED_REGIME}; higher orders in h are not small", h * h);
        }
    }

    /// Proper-time bookkeeping for both parties.
    ///
    /// Rob's rapidity accumulates over accelerated segments; Alice's clock
    /// advances by `(c/a)(sinh(psi + a tau/c) - sinh(psi))` per accelerated
    /// segment and by `cosh(psi) * duration` per coasting segment.
    pub fn ledger(&self, clock: AliceClock) -> ProperTimeLedger {
        let c = self.geometry.c_m_per_s;
        let mut rapidity = 0.0f64;
        let mut ledger = ProperTimeLedger::default();
        for seg in &self.segments {
            ledger.tau_rob += seg.proper_duration();
            let dt = match *seg {
                Segment::Inertial { duration_s } => duration_s * rapidity.cosh(),
                Segment::Accelerated { a_m_s2, tau_s } => {
                    let dpsi = a_m_s2 * tau_s / c;
                    // sinh(psi + d) - sinh(psi) = 2 cosh(psi + d/2) sinh(d/2)
                    let dt = if dpsi == 0.0 {
                        0.0
                    } else {
                        2.0 * (c / a_m_s2) * (rapidity + 0.5 * dpsi).cosh() * (0.5 * dpsi).sinh()
                    };
                    rapidity += dpsi;
                    dt
                }
            };
            ledger.t_alice += match clock {
                AliceClock::Coordinate => dt,
                AliceClock::RobProper => seg.proper_duration(),
            };
        }
        ledger
    }

    /// Free-evolution phases `theta_A = omega_k t`, `theta_B = omega_kp tau`.
    pub fn phase_pair(&self, k: usize, kp: usize, clock: AliceClock) -> PhasePair {
        let l = self.ledger(clock);
        PhasePair::new(
            self.geometry.omega(k) * l.t_alice,
            self.geometry.omega(kp) * l.tau_rob,
        )
    }

    /// Total Bogoliubov transformation of Rob's cavity modes.
    pub fn build_transform(&self, cache: &OracleCache) -> Result<BogoliubovPair> {
        self.build_transform_scaled(cache, 1.0)
    }

    /// As [`Self::build_transform`] with every segment's `h` multiplied by
    /// `scale` (which may be negative, reversing the acceleration).
    pub fn build_transform_scaled(&self, cache: &OracleCache, scale: f64) -> Result<BogoliubovPair> {
        let geometry = cache.geometry();
        if geometry != &self.geometry {
            return Err(Error::Domain("oracle cache geometry differs from trajectory geometry".into()));
        }
        let mut total = BogoliubovPair::identity(geometry.n_max);
        for seg in &self.segments {
            let step = match *seg {
                Segment::Inertial { duration_s } => BogoliubovPair::phase_evolution_minkowski(duration_s, geometry),
                Segment::Accelerated { a_m_s2, tau_s } => {
                    one_segment_transform(tau_s, scale * geometry.h_for_acceleration(a_m_s2), cache)?
                }
            };
            total = compose(&step, &total)?;
        }
        Ok(total)
    }

    /// First-order part of the total transformation in the overall
    /// acceleration strength, normalized to the largest segment `h`.
    pub fn first_order_transform(&self, cache: &OracleCache, ladder: &RichardsonLadder) -> Result<FirstOrder> {
        let h_max = self.max_h();
        let n = self.geometry.n_max;
        if h_max == 0.0 {
            return Ok(FirstOrder {
                alpha1: nalgebra::DMatrix::zeros(n, n),
                beta1: nalgebra::DMatrix::zeros(n, n),
                extrapolation_error: 0.0,
            });
        }
        first_order(|eps| self.build_transform_scaled(cache, eps / h_max), ladder)
    }
}

fn parse_number(tok: Option<&str>, what: &str) -> std::result::Result<f64, String> {
    let tok = tok.ok_or_else(|| format!("missing {what}"))?;
    f64::from_str(tok).map_err(|_| format!("invalid {what} '{tok}'"))
}

fn parse_segment(line: &str) -> std::result::Result<Segment, String> {
    let mut toks = line.split_whitespace();
    let kind = toks.next().unwrap_or("");
    let seg = match kind {
        "inertial" => Segment::Inertial {
            duration_s: parse_number(toks.next(), "duration")?,
        },
        "accel" => Segment::Accelerated {
            a_m_s2: parse_number(toks.next(), "acceleration")?,
            tau_s: parse_number(toks.next(), "proper time")?,
        },
        other => return Err(format!("unknown segment kind '{other}'")),
    };
    if let Some(extra) = toks.next() {
        return Err(format!("unexpected token '{extra}'"));
    }
    Ok(seg)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProperTimeLedger {
    /// Alice's elapsed time (s).
    pub t_alice: f64,
    /// Rob's elapsed proper time at the cavity centre (s).
    pub tau_rob: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePair {
    pub theta_alice: f64,
    pub theta_rob: f64,
    /// `theta_alice + theta_rob`, unwrapped.
    pub phi: f64,
}

impl PhasePair {
    pub fn new(theta_alice: f64, theta_rob: f64) -> Self {
        Self {
            theta_alice,
            theta_rob,
            phi: theta_alice + theta_rob,
        }
    }

    /// `phi` reduced to `[0, 2 pi)`.
    pub fn phi_wrapped(&self) -> f64 {
        self.phi.rem_euclid(TAU)
    }
}

/// Smallest inertial duration `T > 0` after which `phi = 2 pi n` for the
/// modes `k`, `kp` (Alice and Rob both inertial): `T = 2 pi / (omega_k + omega_kp)`.
pub fn phase_revival_time(geometry: &CavityGeometry, k: usize, kp: usize) -> f64 {
    TAU / (geometry.omega(k) + geometry.omega(kp))
}
