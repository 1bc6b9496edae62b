use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use crate::bogoliubov::geometry::CavityGeometry;
use crate::error::{Error, Result};
use crate::protocol::ProtocolParams;
use crate::trajectory::AliceClock;

/// Named parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preset {
    /// r = 1/2 with the circuit-QED cavity.
    #[default]
    Fig3,
    /// r = ln 2, the squeezing reported for microwave two-mode squeezers.
    Experiment,
}

impl Preset {
    pub fn params(self) -> ProtocolParams {
        match self {
            Preset::Fig3 => ProtocolParams::default(),
            Preset::Experiment => ProtocolParams {
                r: LN_2,
                ..ProtocolParams::default()
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Experiment => "experiment",
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig3" => Ok(Preset::Fig3),
            "experiment" => Ok(Preset::Experiment),
            other => Err(Error::Domain(format!(
                "unknown preset '{other}' (expected fig3 or experiment)"
            ))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Default upper acceleration of the sweeps (m/s^2), `h^2 ~ 0.06` for the
/// circuit-QED cavity.
pub const DEFAULT_A_MAX: f64 = 2.94e17;
pub const DEFAULT_A_MIN: f64 = 1e16;
pub const DEFAULT_STEPS: usize = 100;
/// Default sweep length in fundamental periods.
pub const DEFAULT_TAU_PERIODS: f64 = 3.0;

/// Rectangular `(tau, a)` grid, both axes uniformly spaced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub tau_min_s: f64,
    pub tau_max_s: f64,
    pub tau_steps: usize,
    pub a_min_m_s2: f64,
    pub a_max_m_s2: f64,
    pub a_steps: usize,
}

impl SweepGrid {
    pub fn default_for(geometry: &CavityGeometry) -> Self {
        Self {
            tau_min_s: 0.0,
            tau_max_s: DEFAULT_TAU_PERIODS * geometry.fundamental_period_s(),
            tau_steps: DEFAULT_STEPS,
            a_min_m_s2: DEFAULT_A_MIN,
            a_max_m_s2: DEFAULT_A_MAX,
            a_steps: DEFAULT_STEPS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.tau_min_s >= 0.0
            && self.tau_max_s > self.tau_min_s
            && self.tau_max_s.is_finite()
            && self.a_min_m_s2 > 0.0
            && self.a_max_m_s2 > self.a_min_m_s2
            && self.a_max_m_s2.is_finite();
        if !ok {
            return Err(Error::Domain(format!(
                "grid bounds must be non-negative (tau), positive (a) and increasing: {self:?}"
            )));
        }
        if self.tau_steps < 2 || self.a_steps < 2 {
            return Err(Error::Domain("sweeps need at least 2 steps per axis".into()));
        }
        Ok(())
    }

    pub fn tau_values(&self) -> Vec<f64> {
        linspace(self.tau_min_s, self.tau_max_s, self.tau_steps)
    }

    pub fn a_values(&self) -> Vec<f64> {
        linspace(self.a_min_m_s2, self.a_max_m_s2, self.a_steps)
    }

    pub fn len(&self) -> usize {
        self.tau_steps * self.a_steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * (i as f64 / last) })
        .collect()
}

/// Everything a run needs: preset, overrides and the sweep grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Preset,
    pub params: ProtocolParams,
    grid: Option<SweepGrid>,
    tau_min_s: Option<f64>,
    tau_max_s: Option<f64>,
    tau_steps: Option<usize>,
    a_min_m_s2: Option<f64>,
    a_max_m_s2: Option<f64>,
    a_steps: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::from_preset(Preset::default())
    }
}

impl RunConfig {
    pub fn from_preset(preset: Preset) -> Self {
        Self {
            preset,
            params: preset.params(),
            grid: None,
            tau_min_s: None,
            tau_max_s: None,
            tau_steps: None,
            a_min_m_s2: None,
            a_max_m_s2: None,
            a_steps: None,
        }
    }

    /// Replaces the whole grid.
    pub fn with_grid(mut self, grid: SweepGrid) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.params.geometry.n_max = n_max;
        self
    }

    /// Grid with unset bounds filled from the defaults for the geometry.
    pub fn sweep_grid(&self) -> Result<SweepGrid> {
        let base = self
            .grid
            .unwrap_or_else(|| SweepGrid::default_for(&self.params.geometry));
        let grid = SweepGrid {
            tau_min_s: self.tau_min_s.unwrap_or(base.tau_min_s),
            tau_max_s: self.tau_max_s.unwrap_or(base.tau_max_s),
            tau_steps: self.tau_steps.unwrap_or(base.tau_steps),
            a_min_m_s2: self.a_min_m_s2.unwrap_or(base.a_min_m_s2),
            a_max_m_s2: self.a_max_m_s2.unwrap_or(base.a_max_m_s2),
            a_steps: self.a_steps.unwrap_or(base.a_steps),
        };
        grid.validate()?;
        Ok(grid)
    }

    /// True when no grid bound was overridden.
    pub fn uses_default_grid(&self) -> bool {
        self.grid.is_none()
            && self.tau_min_s.is_none()
            && self.tau_max_s.is_none()
            && self.tau_steps.is_none()
            && self.a_min_m_s2.is_none()
            && self.a_max_m_s2.is_none()
            && self.a_steps.is_none()
    }

    /// Parses `key = value` lines on top of `base_preset`. A `preset` key, if
    /// present, must come before any other key.
    pub fn parse(text: &str, base_preset: Preset) -> Result<Self> {
        let mut cfg = Self::from_preset(base_preset);
        let mut seen_other = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fail = |message: String| Error::Parse { line: line_no, message };
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| fail(format!("expected 'key = value', got '{line}'")))?;
            if value.is_empty() {
                return Err(fail(format!("missing value for '{key}'")));
            }
            if key == "preset" {
                if seen_other {
                    return Err(fail("'preset' must precede other keys".into()));
                }
                let preset: Preset = value.parse().map_err(|e: Error| fail(e.to_string()))?;
                cfg = Self::from_preset(preset);
                continue;
            }
            seen_other = true;
            cfg.set(key, value).map_err(fail)?;
        }
        let g = cfg.params.geometry;
        CavityGeometry::new(g.length_m, g.c_m_per_s, g.n_max)
            .map_err(|e| Error::Parse { line: 0, message: e.to_string() })?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let p = &mut self.params;
        match key {
            "r" => p.r = non_negative(value)?,
            "k" => p.k = index(value)?,
            "kp" => p.kp = index(value)?,
            "L_m" => p.geometry.length_m = positive(value)?,
            "c_m_per_s" => p.geometry.c_m_per_s = positive(value)?,
            "n_max" => p.geometry.n_max = index(value)?,
            "alice_clock" => {
                p.clock = match value {
                    "coordinate" => AliceClock::Coordinate,
                    "rob_proper" => AliceClock::RobProper,
                    other => return Err(format!("unknown clock '{other}' (coordinate or rob_proper)")),
                }
            }
            "tau_min_s" => self.tau_min_s = Some(non_negative(value)?),
            "tau_max_s" => self.tau_max_s = Some(positive(value)?),
            "tau_steps" => self.tau_steps = Some(steps(value)?),
            "a_min_m_s2" => self.a_min_m_s2 = Some(positive(value)?),
            "a_max_m_s2" => self.a_max_m_s2 = Some(positive(value)?),
            "a_steps" => self.a_steps = Some(steps(value)?),
            "L" | "c" | "tau_min" | "tau_max" | "a_min" | "a_max" => {
                return Err(format!("key '{key}' needs its SI unit suffix"))
            }
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }
}

fn number(value: &str) -> std::result::Result<f64, String> {
    let v: f64 = value.parse().map_err(|_| format!("invalid number '{value}'"))?;
    if !v.is_finite() {
        return Err(format!("value must be finite, got '{value}'"));
    }
    Ok(v)
}

fn positive(value: &str) -> std::result::Result<f64, String> {
    let v = number(value)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("value must be positive, got {v}"))
    }
}

fn non_negative(value: &str) -> std::result::Result<f64, String> {
    let v = number(value)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("value must be non-negative, got {v}"))
    }
}

fn index(value: &str) -> std::result::Result<usize, String> {
    match value.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("expected a positive integer, got '{value}'")),
    }
}

fn steps(value: &str) -> std::result::Result<usize, String> {
    match value.parse::<usize>() {
        Ok(v) if v >= 2 => Ok(v),
        _ => Err(format!("steps must be an integer >= 2, got '{value}'")),
    }
}
