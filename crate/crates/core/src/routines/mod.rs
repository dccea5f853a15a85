//! One-dimensional coordinate-minimization routines with self-termination.

mod rwt;
mod sgd;

use rand::RngCore;

pub use rwt::{
    confidence_radius, run_rwt, rwt_init_depth, rwt_n0, sequential_test, walk_transition,
    RwtConfig, RwtRoutine, RwtState, SequentialTest, Sign, TestOutcome, Transition,
    MAX_TREE_DEPTH,
};
pub use sgd::{
    run_projected_sgd, run_sgd, sgd_termination, update_mu0, SgdConfig, SgdRoutine, StepRule,
    StopRule,
};

use crate::objectives::Restriction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    PrecisionRule,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    /// 1-based index within the routine call.
    pub step: u64,
    /// Coordinate value queried at this step.
    pub query: f64,
    /// Exact objective value at the full query point.
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutineOutcome {
    pub final_point: f64,
    pub samples_used: u64,
    pub trace: Vec<TraceStep>,
    pub terminated_by: Termination,
}

impl RoutineOutcome {
    pub(crate) fn untouched(start: f64) -> Self {
        Self {
            final_point: start,
            samples_used: 0,
            trace: Vec::new(),
            terminated_by: Termination::BudgetExhausted,
        }
    }
}

/// Per-iteration inputs handed down by the controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationParams {
    pub epsilon: f64,
    /// Progressive hyperparameter `mu0(k)`; shrinks by `gamma` each iteration.
    pub mu0: f64,
}

pub trait CoordinateRoutine: Send + Sync {
    fn name(&self) -> &'static str;

    fn run(
        &self,
        restriction: &mut Restriction<'_>,
        start: f64,
        params: &IterationParams,
        budget: u64,
        rng: &mut dyn RngCore,
    ) -> RoutineOutcome;
}
