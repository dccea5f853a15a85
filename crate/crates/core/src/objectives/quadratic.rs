use nalgebra::DMatrix;
use rand::RngCore;

use super::{
    BoxDomain, ExactTracker, Minimizer, NoiseModel, RecomputeTracker, Separable,
    StochasticObjective,
};
use crate::error::{Error, Result};

/// `psi(x) = (x - c)^T A (x - c) / 2` plus an optional `lambda * ||x||_1`.
#[derive(Debug, Clone)]
pub struct QuadraticObjective {
    // Row-major d x d.
    matrix: Vec<f64>,
    diagonal: bool,
    center: Vec<f64>,
    separable: Separable,
    domain: BoxDomain,
    noise: NoiseModel,
    alpha: f64,
    beta: f64,
    g_max: f64,
    minimizer: Option<Minimizer>,
}

pub fn soft_threshold(v: f64, threshold: f64) -> f64 {
    if v > threshold {
        v - threshold
    } else if v < -threshold {
        v + threshold
    } else {
        0.0
    }
}

/// Diagonal quadratic with curvatures `curvature[i]`.
pub fn make_quadratic(
    curvature: Vec<f64>,
    center: Vec<f64>,
    domain: BoxDomain,
    noise: NoiseModel,
) -> Result<QuadraticObjective> {
    QuadraticObjective::diagonal(curvature, center, Separable::Zero, domain, noise)
}

pub fn make_l1_quadratic(
    curvature: Vec<f64>,
    center: Vec<f64>,
    lambda: f64,
    domain: BoxDomain,
    noise: NoiseModel,
) -> Result<QuadraticObjective> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!("l1 weight {lambda} must be >= 0")));
    }
    QuadraticObjective::diagonal(curvature, center, Separable::L1 { lambda }, domain, noise)
}

/// Quadratic with a full symmetric positive definite matrix.
pub fn make_dense_quadratic(
    matrix: Vec<Vec<f64>>,
    center: Vec<f64>,
    domain: BoxDomain,
    noise: NoiseModel,
) -> Result<QuadraticObjective> {
    let d = domain.dim();
    if matrix.len() != d || matrix.iter().any(|row| row.len() != d) {
        return Err(Error::InvalidArgument(format!("matrix must be {d} x {d}")));
    }
    for i in 0..d {
        for j in 0..i {
            if (matrix[i][j] - matrix[j][i]).abs() > 1e-12 * (1.0 + matrix[i][j].abs()) {
                return Err(Error::InvalidArgument("matrix must be symmetric".into()));
            }
        }
    }
    let flat: Vec<f64> = matrix.into_iter().flatten().collect();
    let eig = DMatrix::from_row_slice(d, d, &flat).symmetric_eigenvalues();
    let alpha = eig.min();
    let beta = eig.max();
    QuadraticObjective::build(flat, false, alpha, beta, center, Separable::Zero, domain, noise)
}

/// Center of the reference separable quadratic: evenly spread over
/// `[-0.45, 0.45]` so the minimizer is interior to `[-1, 1]^d`.
pub fn reference_center(dim: usize) -> Vec<f64> {
    if dim == 1 {
        return vec![0.0];
    }
    (0..dim)
        .map(|i| -0.45 + 0.9 * i as f64 / (dim - 1) as f64)
        .collect()
}

/// `||x - c||^2 / 2` on `[-1, 1]^d` with Gaussian gradient noise `sigma`.
pub fn reference_quadratic(dim: usize, sigma: f64) -> Result<QuadraticObjective> {
    make_quadratic(
        vec![1.0; dim],
        reference_center(dim),
        BoxDomain::cube(dim, -1.0, 1.0)?,
        NoiseModel::sub_gaussian(vec![sigma; dim])?,
    )
}

impl QuadraticObjective {
    fn diagonal(
        curvature: Vec<f64>,
        center: Vec<f64>,
        separable: Separable,
        domain: BoxDomain,
        noise: NoiseModel,
    ) -> Result<Self> {
        let d = domain.dim();
        if curvature.len() != d {
            return Err(Error::InvalidArgument(format!(
                "curvature has length {}, domain has dimension {d}",
                curvature.len()
            )));
        }
        let alpha = curvature.iter().copied().fold(f64::INFINITY, f64::min);
        let beta = curvature.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut matrix = vec![0.0; d * d];
        for (i, &a) in curvature.iter().enumerate() {
            matrix[i * d + i] = a;
        }
        Self::build(matrix, true, alpha, beta, center, separable, domain, noise)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        matrix: Vec<f64>,
        diagonal: bool,
        alpha: f64,
        beta: f64,
        center: Vec<f64>,
        separable: Separable,
        domain: BoxDomain,
        noise: NoiseModel,
    ) -> Result<Self> {
        let d = domain.dim();
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "strong convexity alpha = {alpha} must be positive"
            )));
        }
        if center.len() != d || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("center must be finite with the domain's dimension".into()));
        }
        match &noise {
            NoiseModel::SubGaussian { sigma } if sigma.len() != d => {
                return Err(Error::InvalidArgument("noise sigma must have one entry per coordinate".into()));
            }
            _ => {}
        }
        let mut obj = Self {
            matrix,
            diagonal,
            center,
            separable,
            domain,
            noise,
            alpha,
            beta,
            g_max: 0.0,
            minimizer: None,
        };
        obj.g_max = obj.default_g_max();
        obj.minimizer = obj.closed_form_minimizer();
        Ok(obj)
    }

    /// Largest exact partial-gradient magnitude over the box (attained at a
    /// corner) plus three noise scales.
    fn default_g_max(&self) -> f64 {
        let d = self.dim();
        let reach: Vec<f64> = (0..d)
            .map(|j| {
                (self.domain.lo(j) - self.center[j])
                    .abs()
                    .max((self.domain.hi(j) - self.center[j]).abs())
            })
            .collect();
        let smooth = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| self.matrix[i * d + j].abs() * reach[j])
                    .sum::<f64>()
            })
            .fold(0.0, f64::max);
        let noise = match &self.noise {
            NoiseModel::SubGaussian { sigma } => 3.0 * sigma.iter().copied().fold(0.0, f64::max),
            NoiseModel::HeavyTailed { scale, .. } => 3.0 * scale,
        };
        smooth + self.separable.bound() + noise
    }

    fn closed_form_minimizer(&self) -> Option<Minimizer> {
        let d = self.dim();
        let point: Vec<f64> = if self.diagonal {
            (0..d)
                .map(|i| {
                    let a = self.matrix[i * d + i];
                    let v = self.separable.prox(self.center[i], 1.0 / a);
                    self.domain.clamp(i, v)
                })
                .collect()
        } else if self.domain.contains(&self.center) {
            self.center.clone()
        } else {
            return None;
        };
        let value = self.value_exact(&point);
        Some(Minimizer { point, value })
    }

    /// Installs an externally computed minimizer, for dense instances whose
    /// center lies outside the box.
    pub fn with_minimizer(mut self, minimizer: Minimizer) -> Self {
        self.minimizer = Some(minimizer);
        self
    }

    pub fn with_g_max(mut self, g_max: f64) -> Result<Self> {
        if !(g_max.is_finite() && g_max > 0.0) {
            return Err(Error::InvalidArgument(format!("g_max = {g_max} must be positive")));
        }
        self.g_max = g_max;
        Ok(self)
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.dim() + j]
    }
}

impl StochasticObjective for QuadraticObjective {
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
        self.separable
    }

    fn smooth_value(&self, x: &[f64]) -> f64 {
        let d = self.dim();
        if self.diagonal {
            (0..d)
                .map(|i| {
                    let r = x[i] - self.center[i];
                    0.5 * self.matrix[i * d + i] * r * r
                })
                .sum()
        } else {
            let mut total = 0.0;
            for i in 0..d {
                let ri = x[i] - self.center[i];
                let row = &self.matrix[i * d..(i + 1) * d];
                let ar: f64 = row
                    .iter()
                    .zip(x.iter().zip(&self.center))
                    .map(|(a, (xj, cj))| a * (xj - cj))
                    .sum();
                total += ri * ar;
            }
            0.5 * total
        }
    }

    fn smooth_partial(&self, x: &[f64], i: usize) -> f64 {
        let d = self.dim();
        if self.diagonal {
            self.matrix[i * d + i] * (x[i] - self.center[i])
        } else {
            self.matrix[i * d..(i + 1) * d]
                .iter()
                .zip(x.iter().zip(&self.center))
                .map(|(a, (xj, cj))| a * (xj - cj))
                .sum()
        }
    }

    fn sample_loss(&self, x: &[f64], rng: &mut dyn RngCore) -> f64 {
        let scale_coord = match &self.noise {
            NoiseModel::SubGaussian { sigma } => sigma
                .iter()
                .enumerate()
                .fold((0, 0.0), |best, (i, &s)| if s > best.1 { (i, s) } else { best })
                .0,
            NoiseModel::HeavyTailed { .. } => 0,
        };
        self.value_exact(x) + self.noise.draw(scale_coord, rng)
    }

    fn minimizer(&self) -> Option<&Minimizer> {
        self.minimizer.as_ref()
    }

    fn tracker(&self, x: &[f64]) -> Box<dyn ExactTracker + '_> {
        Box::new(RecomputeTracker::new(self, x))
    }
}
