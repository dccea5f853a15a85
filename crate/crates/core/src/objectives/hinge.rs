use std::sync::Arc;

use rand::{Rng, RngCore};
use sha2::{Digest, Sha256};

use super::{BoxDomain, ExactTracker, Minimizer, NoiseModel, Separable, StochasticObjective};
use crate::error::{Error, Result};
use crate::oracle::{OracleSettings, OracleSolution};

/// Labelled feature vectors, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    labels: Vec<f64>,
    dim: usize,
}

impl Dataset {
    pub fn new(features: Vec<f64>, labels: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 || labels.is_empty() {
            return Err(Error::InvalidArgument("dataset must be nonempty".into()));
        }
        if features.len() != labels.len() * dim {
            return Err(Error::InvalidArgument(format!(
                "{} feature values for {} records of dimension {dim}",
                features.len(),
                labels.len()
            )));
        }
        if let Some(k) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite feature at flat index {k}")));
        }
        if let Some(k) = labels.iter().position(|&z| z != 1.0 && z != -1.0) {
            return Err(Error::InvalidArgument(format!("label {k} is not +-1")));
        }
        Ok(Self { features, labels, dim })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn features(&self, n: usize) -> &[f64] {
        &self.features[n * self.dim..(n + 1) * self.dim]
    }

    pub fn label(&self, n: usize) -> f64 {
        self.labels[n]
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn margin(&self, n: usize, x: &[f64]) -> f64 {
        self.features(n).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut features = Vec::with_capacity(indices.len() * self.dim);
        let mut labels = Vec::with_capacity(indices.len());
        for &n in indices {
            features.extend_from_slice(self.features(n));
            labels.push(self.labels[n]);
        }
        Self::new(features, labels, self.dim)
    }

    /// SHA-256 over the shape, the feature bits and the labels.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.len() as u64).to_le_bytes());
        h.update((self.dim as u64).to_le_bytes());
        for v in &self.features {
            h.update(v.to_le_bytes());
        }
        for z in &self.labels {
            h.update(z.to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn accuracy(&self, x: &[f64]) -> f64 {
        let correct = (0..self.len())
            .filter(|&n| self.label(n) * self.margin(n, x) > 0.0)
            .count();
        correct as f64 / self.len() as f64
    }
}

/// Empirical regularized hinge loss
/// `f(x) = mean_n max{0, 1 - z_n <x, y_n>} + (alpha/2) ||x||^2`,
/// sampled one record at a time.
#[derive(Debug, Clone)]
pub struct HingeObjective {
    data: Arc<Dataset>,
    alpha: f64,
    beta: f64,
    g_max: f64,
    domain: BoxDomain,
    noise: NoiseModel,
    minimizer: Option<Minimizer>,
    hash: String,
}

/// Builds the hinge objective on the box `[-r, r]^d` with `r = sqrt(2/alpha)`,
/// which contains the unconstrained minimizer because
/// `(alpha/2)||x*||^2 <= f(x*) <= f(0) = 1`.
pub fn make_hinge(data: Arc<Dataset>, alpha: f64) -> Result<HingeObjective> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("regularization alpha = {alpha} must be positive")));
    }
    if data.is_empty() {
        return Err(Error::InvalidArgument("hinge objective needs a nonempty dataset".into()));
    }
    let radius = (2.0 / alpha).sqrt();
    let domain = BoxDomain::cube(data.dim(), -radius, radius)?;
    HingeObjective::with_domain(data, alpha, domain)
}

impl HingeObjective {
    pub fn with_domain(data: Arc<Dataset>, alpha: f64, domain: BoxDomain) -> Result<Self> {
        if domain.dim() != data.dim() {
            return Err(Error::InvalidArgument("domain and dataset dimensions differ".into()));
        }
        let n = data.len();
        let d = data.dim();
        let max_sq_norm = (0..n)
            .map(|k| data.features(k).iter().map(|v| v * v).sum::<f64>())
            .fold(0.0, f64::max);
        // Heuristic smoothness surrogate; the hinge term itself is nonsmooth.
        let beta = alpha + max_sq_norm / n as f64;
        // Sampling noise is bounded by the largest feature magnitude per coordinate.
        let sigma: Vec<f64> = (0..d)
            .map(|i| (0..n).map(|k| data.features(k)[i].abs()).fold(0.0, f64::max))
            .collect();
        let reach = (0..d)
            .map(|i| domain.lo(i).abs().max(domain.hi(i).abs()))
            .fold(0.0, f64::max);
        let g_max = sigma.iter().copied().fold(0.0, f64::max) + alpha * reach;
        let hash = data.content_hash();
        Ok(Self {
            data,
            alpha,
            beta,
            g_max,
            domain,
            noise: NoiseModel::SubGaussian { sigma },
            minimizer: None,
            hash,
        })
    }

    /// Installs an externally computed minimizer (e.g. from the oracle).
    pub fn with_minimizer(mut self, minimizer: Minimizer) -> Self {
        self.minimizer = Some(minimizer);
        self
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    fn sample_index(&self, rng: &mut dyn RngCore) -> usize {
        rng.random_range(0..self.data.len())
    }

    fn regularizer(&self, x: &[f64]) -> f64 {
        0.5 * self.alpha * x.iter().map(|v| v * v).sum::<f64>()
    }
}

impl StochasticObjective for HingeObjective {
    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn beta(&self) -> f64 {
        self.beta
    }

    fn g_max(&self) -> f64 {
        self.g_max
    }

    fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    fn separable(&self) -> Separable {
        Separable::Zero
    }

    fn smooth_value(&self, x: &[f64]) -> f64 {
        let n = self.data.len();
        let hinge: f64 = (0..n)
            .map(|k| (1.0 - self.data.label(k) * self.data.margin(k, x)).max(0.0))
            .sum();
        hinge / n as f64 + self.regularizer(x)
    }

    fn smooth_partial(&self, x: &[f64], i: usize) -> f64 {
        let n = self.data.len();
        let mut acc = 0.0;
        for k in 0..n {
            let z = self.data.label(k);
            if 1.0 - z * self.data.margin(k, x) > 0.0 {
                acc -= z * self.data.features(k)[i];
            }
        }
        acc / n as f64 + self.alpha * x[i]
    }

    fn gradient_exact(&self, x: &[f64]) -> Vec<f64> {
        let n = self.data.len();
        let mut g = vec![0.0; self.dim()];
        for k in 0..n {
            let z = self.data.label(k);
            if 1.0 - z * self.data.margin(k, x) > 0.0 {
                for (gi, yi) in g.iter_mut().zip(self.data.features(k)) {
                    *gi -= z * yi;
                }
            }
        }
        for (gi, xi) in g.iter_mut().zip(x) {
            *gi = *gi / n as f64 + self.alpha * xi;
        }
        g
    }

    fn sample_partial_grad(&self, x: &[f64], i: usize, rng: &mut dyn RngCore) -> f64 {
        let k = self.sample_index(rng);
        let z = self.data.label(k);
        let active = 1.0 - z * self.data.margin(k, x) > 0.0;
        let hinge = if active { -z * self.data.features(k)[i] } else { 0.0 };
        hinge + self.alpha * x[i]
    }

    fn sample_loss(&self, x: &[f64], rng: &mut dyn RngCore) -> f64 {
        let k = self.sample_index(rng);
        (1.0 - self.data.label(k) * self.data.margin(k, x)).max(0.0) + self.regularizer(x)
    }

    fn minimizer(&self) -> Option<&Minimizer> {
        self.minimizer.as_ref()
    }

    fn tracker(&self, x: &[f64]) -> Box<dyn ExactTracker + '_> {
        Box::new(HingeTracker::new(self, x))
    }

    fn dataset_hash(&self) -> Option<String> {
        Some(self.hash.clone())
    }

    fn solve_minimizer(&self, settings: &OracleSettings) -> Result<OracleSolution> {
        crate::oracle::hinge_dual_ascent(self, settings)
    }
}

/// Keeps every record's margin `<x, y_n>` current under single-coordinate
/// changes, so each value query is O(n) instead of O(n d).
struct HingeTracker<'a> {
    objective: &'a HingeObjective,
    point: Vec<f64>,
    margins: Vec<f64>,
}

impl<'a> HingeTracker<'a> {
    fn new(objective: &'a HingeObjective, x: &[f64]) -> Self {
        let margins = (0..objective.data.len())
            .map(|k| objective.data.margin(k, x))
            .collect();
        Self {
            objective,
            point: x.to_vec(),
            margins,
        }
    }
}

impl ExactTracker for HingeTracker<'_> {
    fn point(&self) -> &[f64] {
        &self.point
    }

    fn set_coord(&mut self, i: usize, v: f64) {
        let delta = v - self.point[i];
        if delta == 0.0 {
            return;
        }
        self.point[i] = v;
        let data = &self.objective.data;
        for (k, m) in self.margins.iter_mut().enumerate() {
            *m += delta * data.features(k)[i];
        }
    }

    fn value(&self) -> f64 {
        let data = &self.objective.data;
        let hinge: f64 = self
            .margins
            .iter()
            .enumerate()
            .map(|(k, m)| (1.0 - data.label(k) * m).max(0.0))
            .sum();
        hinge / data.len() as f64 + self.objective.regularizer(&self.point)
    }
}
