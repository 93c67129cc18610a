//! Concurrence sweeps along the channel-strength axis and detection of the
//! intervals on which entanglement vanishes.
//!
//! A zone is a maximal strength interval with concurrence `<= zero_tol`.
//! Candidate zones come from a uniform grid; each boundary is then bisected
//! on the predicate `concurrence > zero_tol` down to `refine_tol`. Zones
//! narrower than one grid cell may be missed entirely.

use rayon::prelude::*;

use crate::channels::{evolve, ChannelKind, ChannelParam};
use crate::concurrence::concurrence;
use crate::spectra::{closed_form_spectrum, concurrence_from_spectrum};
use crate::states::{mems, DensityMatrix4, StateParam};
use crate::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 2001;
pub const DEFAULT_REFINE_TOL: f64 = 1e-6;
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Kraus evolution followed by the Wootters construction.
    Numeric,
    /// Closed-form spectra.
    ClosedForm,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Numeric => "numeric",
            Engine::ClosedForm => "closedform",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub kind: ChannelKind,
    pub gamma: f64,
    pub strength_min: f64,
    pub strength_max: f64,
    pub grid_points: usize,
    pub refine_tol: f64,
    pub zero_tol: f64,
    pub engine: Engine,
}

impl SweepConfig {
    /// Defaults: strength domain `[0, 1]`, 2001 grid points, numeric engine.
    pub fn new(kind: ChannelKind, gamma: f64) -> Self {
        Self {
            kind,
            gamma,
            strength_min: 0.0,
            strength_max: 1.0,
            grid_points: DEFAULT_GRID_POINTS,
            refine_tol: DEFAULT_REFINE_TOL,
            zero_tol: DEFAULT_ZERO_TOL,
            engine: Engine::Numeric,
        }
    }

    pub fn with_range(mut self, min: f64, max: f64) -> Self {
        self.strength_min = min;
        self.strength_max = max;
        self
    }

    pub fn with_grid_points(mut self, n: usize) -> Self {
        self.grid_points = n;
        self
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn validate(&self) -> Result<()> {
        StateParam::new(self.gamma)?;
        ChannelParam::new(self.kind, self.strength_min)?;
        ChannelParam::new(self.kind, self.strength_max)?;
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.strength_min < self.strength_max) {
            return bad(format!(
                "strength range [{}, {}] is empty",
                self.strength_min, self.strength_max
            ));
        }
        if self.grid_points < 2 {
            return bad(format!("grid_points = {} (need >= 2)", self.grid_points));
        }
        if !(self.refine_tol > 0.0) {
            return bad(format!("refine_tol = {} (need > 0)", self.refine_tol));
        }
        if !(self.zero_tol > 0.0) {
            return bad(format!("zero_tol = {} (need > 0)", self.zero_tol));
        }
        Ok(())
    }

    /// Uniform grid; endpoints are hit exactly.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.grid_points;
        let span = self.strength_max - self.strength_min;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.strength_max
                } else {
                    self.strength_min + span * (i as f64) / ((n - 1) as f64)
                }
            })
            .collect()
    }
}

/// Evaluates concurrence for one configuration at arbitrary strengths.
struct Evaluator {
    kind: ChannelKind,
    gamma: f64,
    engine: Engine,
    initial: DensityMatrix4<f64>,
}

impl Evaluator {
    fn new(cfg: &SweepConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            kind: cfg.kind,
            gamma: cfg.gamma,
            engine: cfg.engine,
            initial: mems(StateParam::new(cfg.gamma)?)?,
        })
    }

    fn at(&self, strength: f64) -> Result<f64> {
        let value = match self.engine {
            Engine::Numeric => {
                evolve(&self.initial, self.kind, strength).and_then(|rho| concurrence(&rho))
            }
            Engine::ClosedForm => closed_form_spectrum(self.kind, self.gamma, strength)
                .map(|s| concurrence_from_spectrum(&s)),
        };
        value.map_err(|e| match e {
            Error::Integrity { detail } => Error::Integrity {
                detail: format!("at strength {strength}: {detail}"),
            },
            other => other,
        })
    }
}

/// Sampled `(strength, concurrence)` series.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceCurve {
    pub samples: Vec<(f64, f64)>,
}

impl ConcurrenceCurve {
    pub fn strengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }
}

pub fn sample_curve(cfg: &SweepConfig) -> Result<ConcurrenceCurve> {
    let eval = Evaluator::new(cfg)?;
    sample_with(&eval, cfg)
}

fn sample_with(eval: &Evaluator, cfg: &SweepConfig) -> Result<ConcurrenceCurve> {
    let samples = cfg
        .grid()
        .into_par_iter()
        .map(|s| eval.at(s).map(|c| (s, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConcurrenceCurve { samples })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zone {
    pub death: f64,
    /// `None` when the zone runs to the end of the strength range.
    pub rebirth: Option<f64>,
    /// Isolated zero narrower than a grid cell, reported with
    /// `death == rebirth`.
    pub touch: bool,
}

impl Zone {
    pub fn width(&self, strength_max: f64) -> f64 {
        self.rebirth.unwrap_or(strength_max) - self.death
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZoneReport {
    pub kind: ChannelKind,
    pub gamma: f64,
    pub zones: Vec<Zone>,
}

impl ZoneReport {
    /// Zones of positive width (touch points excluded).
    pub fn sudden_death_zones(&self) -> impl Iterator<Item = &Zone> {
        self.zones.iter().filter(|z| !z.touch)
    }
}

/// Bisects between `alive` (concurrence above zero_tol) and `dead`; returns
/// the midpoint of the final bracket.
fn refine(eval: &Evaluator, mut alive: f64, mut dead: f64, cfg: &SweepConfig) -> Result<f64> {
    while (alive - dead).abs() > cfg.refine_tol {
        let mid = 0.5 * (alive + dead);
        if eval.at(mid)? > cfg.zero_tol {
            alive = mid;
        } else {
            dead = mid;
        }
    }
    Ok(0.5 * (alive + dead))
}

pub fn find_zones(cfg: &SweepConfig) -> Result<ZoneReport> {
    let eval = Evaluator::new(cfg)?;
    let curve = sample_with(&eval, cfg)?;
    let samples = &curve.samples;
    let n = samples.len();
    let cell = (cfg.strength_max - cfg.strength_min) / ((n - 1) as f64);
    let dead = |i: usize| samples[i].1 <= cfg.zero_tol;

    let mut zones = Vec::new();
    let mut i = 0;
    while i < n {
        if !dead(i) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && dead(j + 1) {
            j += 1;
        }
        let death = if i == 0 {
            samples[0].0
        } else {
            refine(&eval, samples[i - 1].0, samples[i].0, cfg)?
        };
        let rebirth = if j == n - 1 {
            None
        } else {
            Some(refine(&eval, samples[j + 1].0, samples[j].0, cfg)?)
        };
        let zone = match rebirth {
            Some(r) if i == j && r - death < cell => {
                let mid = 0.5 * (death + r);
                Zone {
                    death: mid,
                    rebirth: Some(mid),
                    touch: true,
                }
            }
            _ => Zone {
                death,
                rebirth,
                touch: false,
            },
        };
        zones.push(zone);
        i = j + 1;
    }
    Ok(ZoneReport {
        kind: cfg.kind,
        gamma: cfg.gamma,
        zones,
    })
}
