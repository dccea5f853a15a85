use rand::RngCore;

use super::{CoordinateRoutine, IterationParams, RoutineOutcome, Termination, TraceStep};
use crate::error::{Error, Result};
use crate::objectives::Restriction;

/// Number of SGD steps guaranteeing expected excess `<= epsilon`:
/// `ceil(2 beta g_max^2 / (alpha^2 epsilon))`.
pub fn sgd_termination(epsilon: f64, alpha: f64, beta: f64, g_max: f64) -> Result<u64> {
    for (name, v) in [("epsilon", epsilon), ("alpha", alpha), ("beta", beta), ("g_max", g_max)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidArgument(format!("{name} = {v} must be positive")));
        }
    }
    let steps = (2.0 * beta * g_max * g_max / (alpha * alpha * epsilon)).ceil();
    if steps > u64::MAX as f64 {
        return Err(Error::InvalidArgument("termination time overflows".into()));
    }
    Ok(steps as u64)
}

pub fn update_mu0(mu0: f64, gamma: f64) -> f64 {
    gamma * mu0
}

/// Step-size constants `eta_t = mu / (1 + nu t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgdConfig {
    pub mu0: f64,
    pub alpha: f64,
    pub beta: f64,
    pub g_max: f64,
}

impl SgdConfig {
    pub fn new(mu0: f64, alpha: f64, beta: f64, g_max: f64) -> Result<Self> {
        let cfg = Self { mu0, alpha, beta, g_max };
        if !(cfg.mu() > 0.0 && cfg.nu() > 0.0 && beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "SGD constants must be positive (mu0 = {mu0}, alpha = {alpha}, beta = {beta}, g_max = {g_max})"
            )));
        }
        Ok(cfg)
    }

    pub fn for_restriction(mu0: f64, restriction: &Restriction<'_>) -> Result<Self> {
        Self::new(mu0, restriction.alpha(), restriction.beta(), restriction.g_max())
    }

    pub fn mu(&self) -> f64 {
        self.mu0 * self.alpha / (2.0 * self.g_max * self.g_max)
    }

    pub fn nu(&self) -> f64 {
        self.mu0 * self.alpha * self.alpha / (4.0 * self.g_max * self.g_max)
    }

    /// `t` counts from 0.
    pub fn step_size(&self, t: u64) -> f64 {
        self.mu() / (1.0 + self.nu() * t as f64)
    }
}

/// Projected SGD for a fixed number of steps, truncated at `budget`.
/// Returns the iterate after the last update.
pub fn run_projected_sgd(
    restriction: &mut Restriction<'_>,
    start: f64,
    steps: u64,
    step_size: impl Fn(u64) -> f64,
    budget: u64,
    rng: &mut dyn RngCore,
) -> RoutineOutcome {
    if budget == 0 {
        return RoutineOutcome::untouched(start);
    }
    let n = steps.min(budget);
    let mut x = restriction.project(start);
    let mut trace = Vec::with_capacity(n as usize);
    for t in 0..n {
        let g = restriction.sample_grad(x, rng);
        let loss = restriction.value_exact(x);
        trace.push(TraceStep {
            step: t + 1,
            query: x,
            loss,
        });
        x = restriction.project(x - step_size(t) * g);
    }
    RoutineOutcome {
        final_point: x,
        samples_used: n,
        trace,
        terminated_by: if budget < steps {
            Termination::BudgetExhausted
        } else {
            Termination::PrecisionRule
        },
    }
}

/// SGD with the decaying step `mu/(1 + nu t)` stopped at `sgd_termination`.
pub fn run_sgd(
    restriction: &mut Restriction<'_>,
    start: f64,
    epsilon: f64,
    config: &SgdConfig,
    budget: u64,
    rng: &mut dyn RngCore,
) -> Result<RoutineOutcome> {
    let steps = sgd_termination(epsilon, config.alpha, config.beta, config.g_max)?;
    Ok(run_projected_sgd(restriction, start, steps, |t| config.step_size(t), budget, rng))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// `eta_t = mu/(1 + nu t)` built from `mu0(k)`.
    Decaying,
    /// `eta_t = mu0(k)` held fixed within the iteration.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// `ceil(2 beta g_max^2 / (alpha^2 epsilon))`.
    Lemma3,
    /// `ceil(scale / epsilon)`.
    Inverse { scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgdRoutine {
    pub step: StepRule,
    pub stop: StopRule,
}

impl Default for SgdRoutine {
    fn default() -> Self {
        Self {
            step: StepRule::Decaying,
            stop: StopRule::Lemma3,
        }
    }
}

impl SgdRoutine {
    pub fn steps(&self, epsilon: f64, restriction: &Restriction<'_>) -> u64 {
        match self.stop {
            StopRule::Lemma3 => sgd_termination(
                epsilon,
                restriction.alpha(),
                restriction.beta(),
                restriction.g_max(),
            )
            .expect("objective constants validated at construction"),
            StopRule::Inverse { scale } => (scale / epsilon).ceil() as u64,
        }
    }
}

impl CoordinateRoutine for SgdRoutine {
    fn name(&self) -> &'static str {
        "sgd"
    }

    fn run(
        &self,
        restriction: &mut Restriction<'_>,
        start: f64,
        params: &IterationParams,
        budget: u64,
        rng: &mut dyn RngCore,
    ) -> RoutineOutcome {
        let steps = self.steps(params.epsilon, restriction);
        match self.step {
            StepRule::Decaying => {
                let cfg = SgdConfig::for_restriction(params.mu0, restriction)
                    .expect("mu0 and objective constants are positive");
                run_projected_sgd(restriction, start, steps, |t| cfg.step_size(t), budget, rng)
            }
            StepRule::Constant => {
                let eta = params.mu0;
                run_projected_sgd(restriction, start, steps, |_| eta, budget, rng)
            }
        }
    }
}
