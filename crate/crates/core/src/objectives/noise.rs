use rand::{Rng, RngCore};
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Zero-mean additive noise on gradient observations.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseModel {
    /// Gaussian draws with per-coordinate standard deviation; the variance
    /// proxy of a Gaussian equals its variance.
    SubGaussian { sigma: Vec<f64> },
    /// Symmetrized Pareto draws with finite `b`-th absolute moment and
    /// infinite variance.
    HeavyTailed { b: f64, scale: f64 },
}

impl NoiseModel {
    pub fn sub_gaussian(sigma: Vec<f64>) -> Result<Self> {
        if sigma.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::InvalidArgument("noise sigma must be finite and >= 0".into()));
        }
        Ok(NoiseModel::SubGaussian { sigma })
    }

    pub fn heavy_tailed(b: f64, scale: f64) -> Result<Self> {
        if !(b > 1.0 && b < 2.0) {
            return Err(Error::InvalidArgument(format!("tail moment b = {b} must lie in (1, 2)")));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidArgument(format!("tail scale = {scale} must be positive")));
        }
        Ok(NoiseModel::HeavyTailed { b, scale })
    }

    pub fn noiseless(dim: usize) -> Self {
        NoiseModel::SubGaussian { sigma: vec![0.0; dim] }
    }

    /// Pareto tail index used by the heavy-tailed generator: halfway between
    /// `b` and 2, so moments of order `< index` exist and the variance does not.
    pub fn tail_index(b: f64) -> f64 {
        0.5 * (b + 2.0)
    }

    /// Sub-Gaussian proxy for coordinate `i`; `None` for heavy tails.
    pub fn sigma(&self, i: usize) -> Option<f64> {
        match self {
            NoiseModel::SubGaussian { sigma } => Some(sigma[i]),
            NoiseModel::HeavyTailed { .. } => None,
        }
    }

    pub fn max_sigma(&self) -> Option<f64> {
        match self {
            NoiseModel::SubGaussian { sigma } => Some(sigma.iter().copied().fold(0.0, f64::max)),
            NoiseModel::HeavyTailed { .. } => None,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        matches!(self, NoiseModel::SubGaussian { sigma } if sigma.iter().all(|&s| s == 0.0))
    }

    /// One draw for coordinate `i`. Noiseless coordinates consume no randomness.
    pub fn draw(&self, i: usize, rng: &mut dyn RngCore) -> f64 {
        match self {
            NoiseModel::SubGaussian { sigma } => {
                let s = sigma[i];
                if s == 0.0 {
                    0.0
                } else {
                    Normal::new(0.0, s).expect("sigma validated").sample(rng)
                }
            }
            NoiseModel::HeavyTailed { b, scale } => {
                let a = Self::tail_index(*b);
                // Inverse CDF of Pareto(x_m = 1, a); symmetric sign keeps the mean at 0.
                let u: f64 = 1.0 - rng.random::<f64>();
                let magnitude = u.powf(-1.0 / a);
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                sign * scale * magnitude
            }
        }
    }
}
