//! Online projected stochastic coordinate descent: one random coordinate and
//! one noisy partial gradient per step.

use rand::Rng;

use crate::controller::{Algorithm, InitialPoint, IterationRecord, RunRecord, StepRecord};
use crate::error::{Error, Result};
use crate::objectives::StochasticObjective;
use crate::rng::{SeedStreams, Stream};

/// Step-size schedule, indexed from `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScdStep {
    /// `c1 / ceil(t / c2)`.
    Piecewise { c1: f64, c2: f64 },
    /// `a / (b + t)`.
    InverseLinear { a: f64, b: f64 },
}

impl Default for ScdStep {
    fn default() -> Self {
        ScdStep::Piecewise { c1: 5.0, c2: 10_000.0 }
    }
}

impl ScdStep {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ScdStep::Piecewise { c1, c2 } => c1 > 0.0 && c2 > 0.0 && c1.is_finite() && c2.is_finite(),
            // b > -1 keeps the denominator positive from t = 1 on.
            ScdStep::InverseLinear { a, b } => a > 0.0 && b > -1.0 && a.is_finite() && b.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid coordinate-descent step schedule {self:?}")))
        }
    }

    pub fn eta(&self, t: u64) -> f64 {
        let t = t as f64;
        match *self {
            ScdStep::Piecewise { c1, c2 } => c1 / (t / c2).ceil(),
            ScdStep::InverseLinear { a, b } => a / (b + t),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScdConfig {
    pub step: ScdStep,
    pub horizon: u64,
    pub initial: InitialPoint,
}

pub fn run_scd(
    objective: &dyn StochasticObjective,
    config: &ScdConfig,
    streams: &SeedStreams,
) -> Result<RunRecord> {
    config.step.validate()?;
    if config.horizon == 0 {
        return Err(Error::InvalidArgument("horizon T must be at least 1".into()));
    }
    let domain = objective.domain();
    let x0 = config.initial.resolve(domain, &mut streams.stream(Stream::Init))?;
    let mut coord_rng = streams.stream(Stream::Coordinates);
    let mut noise_rng = streams.stream(Stream::Noise);

    let d = objective.dim();
    let mut x = x0.clone();
    let mut tracker = objective.tracker(&x);
    let f_initial = tracker.value();
    let mut f_now = f_initial;
    let capacity = config.horizon.min(1 << 24) as usize;
    let mut steps = Vec::with_capacity(capacity);
    let mut iterations = Vec::with_capacity(capacity);

    for t in 1..=config.horizon {
        let i = coord_rng.random_range(0..d);
        let g = objective.sample_partial_grad(&x, i, &mut noise_rng);
        steps.push(StepRecord {
            t,
            k: t,
            coord: i,
            query: x[i],
            epsilon: None,
            f_exact: f_now,
        });
        let v = domain.clamp(i, x[i] - config.step.eta(t) * g);
        x[i] = v;
        tracker.set_coord(i, v);
        f_now = tracker.value();
        iterations.push(IterationRecord {
            k: t,
            epsilon: None,
            mu0: None,
            updates: vec![(i, v)],
            start_t: t,
            samples: 1,
            truncated: false,
            f_after: f_now,
            worker_values: Vec::new(),
        });
    }

    Ok(RunRecord {
        algorithm: Algorithm::Scd,
        horizon: config.horizon,
        initial: x0,
        f_initial,
        steps,
        iterations,
        final_point: x,
        samples_charged: config.horizon,
    })
}
