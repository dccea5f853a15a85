//! Stochastic composite objectives `f = psi + phi` over a box, with exact
//! oracles for evaluation and noisy partial-gradient oracles for the
//! optimizers.

mod domain;
mod hinge;
mod noise;
mod quadratic;
mod restriction;

use std::fmt::Debug;

use rand::RngCore;

pub use domain::BoxDomain;
pub use hinge::{make_hinge, Dataset, HingeObjective};
pub use noise::NoiseModel;
pub use quadratic::{
    make_dense_quadratic, make_l1_quadratic, make_quadratic, reference_center, reference_quadratic,
    soft_threshold, QuadraticObjective,
};
pub use restriction::Restriction;

use crate::oracle::{OracleSettings, OracleSolution};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Minimizer {
    pub point: Vec<f64>,
    pub value: f64,
}

/// The separable part `phi(x) = sum_i phi_i(x_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Separable {
    Zero,
    /// `lambda * |x_i|` on every coordinate.
    L1 { lambda: f64 },
}

impl Separable {
    pub fn value(&self, v: f64) -> f64 {
        match *self {
            Separable::Zero => 0.0,
            Separable::L1 { lambda } => lambda * v.abs(),
        }
    }

    /// Subgradient selection; zero at the kink.
    pub fn subgradient(&self, v: f64) -> f64 {
        match *self {
            Separable::Zero => 0.0,
            Separable::L1 { lambda } => {
                if v > 0.0 {
                    lambda
                } else if v < 0.0 {
                    -lambda
                } else {
                    0.0
                }
            }
        }
    }

    /// `argmin_u step * phi_i(u) + (u - v)^2 / 2`.
    pub fn prox(&self, v: f64, step: f64) -> f64 {
        match *self {
            Separable::Zero => v,
            Separable::L1 { lambda } => soft_threshold(v, step * lambda),
        }
    }

    pub fn bound(&self) -> f64 {
        match *self {
            Separable::Zero => 0.0,
            Separable::L1 { lambda } => lambda,
        }
    }
}

/// Incrementally maintained exact objective value along a trajectory whose
/// consecutive points differ in few coordinates.
pub trait ExactTracker: Send {
    fn point(&self) -> &[f64];
    fn set_coord(&mut self, i: usize, v: f64);
    fn value(&self) -> f64;
}

/// A strongly convex stochastic objective with first-order bandit feedback.
///
/// Implementations are immutable after construction; all randomness comes
/// from the caller's generator.
pub trait StochasticObjective: Debug + Send + Sync {
    fn domain(&self) -> &BoxDomain;
    /// Strong convexity modulus of the smooth part.
    fn alpha(&self) -> f64;
    /// Smoothness of the smooth part (an effective surrogate for the hinge).
    fn beta(&self) -> f64;
    /// Bound on the root second moment of any noisy partial gradient.
    fn g_max(&self) -> f64;
    fn noise(&self) -> &NoiseModel;
    fn separable(&self) -> Separable;

    fn smooth_value(&self, x: &[f64]) -> f64;
    fn smooth_partial(&self, x: &[f64], i: usize) -> f64;

    fn dim(&self) -> usize {
        self.domain().dim()
    }

    fn value_exact(&self, x: &[f64]) -> f64 {
        let phi = self.separable();
        self.smooth_value(x) + x.iter().map(|&v| phi.value(v)).sum::<f64>()
    }

    fn partial_grad_exact(&self, x: &[f64], i: usize) -> f64 {
        self.smooth_partial(x, i) + self.separable().subgradient(x[i])
    }

    fn gradient_exact(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim()).map(|i| self.partial_grad_exact(x, i)).collect()
    }

    /// One noisy observation `G_i(x; xi)`, unbiased for the exact partial.
    fn sample_partial_grad(&self, x: &[f64], i: usize, rng: &mut dyn RngCore) -> f64 {
        self.partial_grad_exact(x, i) + self.noise().draw(i, rng)
    }

    /// One noisy loss observation `F(x; xi)`, unbiased for `f(x)`.
    fn sample_loss(&self, x: &[f64], rng: &mut dyn RngCore) -> f64;

    fn minimizer(&self) -> Option<&Minimizer>;

    /// Sub-Gaussian proxy usable as the sequential-test scale; `None` for
    /// heavy-tailed noise.
    fn sigma_max(&self) -> Option<f64> {
        self.noise().max_sigma()
    }

    fn tracker(&self, x: &[f64]) -> Box<dyn ExactTracker + '_>;

    /// Content hash identifying data-backed objectives; `None` for synthetics.
    fn dataset_hash(&self) -> Option<String> {
        None
    }

    fn solve_minimizer(&self, settings: &OracleSettings) -> Result<OracleSolution> {
        crate::oracle::proximal_gradient(self, settings)
    }
}

/// Tracker that re-evaluates the full objective on every query.
pub struct RecomputeTracker<'a, O: ?Sized> {
    objective: &'a O,
    point: Vec<f64>,
}

impl<'a, O: StochasticObjective + ?Sized> RecomputeTracker<'a, O> {
    pub fn new(objective: &'a O, x: &[f64]) -> Self {
        Self {
            objective,
            point: x.to_vec(),
        }
    }
}

impl<O: StochasticObjective + ?Sized> ExactTracker for RecomputeTracker<'_, O> {
    fn point(&self) -> &[f64] {
        &self.point
    }

    fn set_coord(&mut self, i: usize, v: f64) {
        self.point[i] = v;
    }

    fn value(&self) -> f64 {
        self.objective.value_exact(&self.point)
    }
}
