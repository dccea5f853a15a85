//! Experiment configuration. Every section has defaults, so an empty file
//! describes the one-vs-rest MNIST experiment with its published
//! hyperparameters.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::controller::{InitialPoint, SampleAccounting};
use crate::error::{Error, Result};
use crate::routines::{RwtRoutine, SgdRoutine, StepRule, StopRule};
use crate::scd::ScdStep;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// `0.5 ||x - c||^2` on `[-1, 1]^d` with evenly spread centers.
    ReferenceQuadratic,
    /// Diagonal quadratic with explicit curvature and center.
    Quadratic,
    /// Diagonal quadratic plus `lambda ||x||_1`.
    L1Quadratic,
    /// `0.5 (x - c)' A (x - c)` with a dense symmetric `A`.
    DenseQuadratic,
    /// Regularized hinge loss on a labelled dataset.
    #[default]
    Hinge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    #[default]
    SubGaussian,
    HeavyTailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObjectiveConfig {
    pub kind: ObjectiveKind,
    pub dim: usize,
    /// Sub-Gaussian noise scale on every partial gradient.
    pub sigma: f64,
    pub noise: NoiseKind,
    /// Moment order `b` in (1, 2) for heavy-tailed noise.
    pub tail_b: f64,
    pub tail_scale: f64,
    pub lower: f64,
    pub upper: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    pub lambda: f64,
    /// Strong-convexity weight of the hinge objective.
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_max: Option<f64>,
    /// Output of the `oracle` command for data-backed objectives.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimizer_file: Option<PathBuf>,
}

impl Default for ObjectiveConfig {
    fn default() -> Self {
        Self {
            kind: ObjectiveKind::Hinge,
            dim: 10,
            sigma: 0.1,
            noise: NoiseKind::SubGaussian,
            tail_b: 1.5,
            tail_scale: 1.0,
            lower: -1.0,
            upper: 1.0,
            curvature: None,
            center: None,
            matrix: None,
            lambda: 0.0,
            alpha: 1.2e-2,
            g_max: None,
            minimizer_file: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    /// MNIST when the files are present, synthetic data otherwise.
    #[default]
    Auto,
    Mnist,
    Synth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    pub source: DataSource,
    /// Directory with the IDX files; falls back to `$PCM_DATA_DIR`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    pub digit: u8,
    /// Keep a uniform subset of this many records.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<usize>,
    /// Records and feature dimension (bias included) of synthetic data.
    pub synth_records: usize,
    pub synth_dim: usize,
    pub synth_margin: f64,
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            source: DataSource::Auto,
            dir: None,
            digit: 0,
            limit: None,
            synth_records: 2000,
            synth_dim: 785,
            synth_margin: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    #[default]
    Pcm,
    Scd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Origin,
    Lower,
    Upper,
    Center,
    /// Uniform over the whole domain.
    Uniform,
    /// Uniform over `[-init_half_width, init_half_width]^d` within the domain.
    #[default]
    UniformCube,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AccountingKind {
    #[default]
    TotalWork,
    WallClock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub kind: AlgorithmKind,
    /// Horizon `T` in samples.
    pub horizon: u64,
    pub initial: InitialKind,
    pub init_half_width: f64,
    /// Parallel PCM workers; 1 is the serial algorithm.
    pub workers: usize,
    pub accounting: AccountingKind,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        Self {
            kind: AlgorithmKind::Pcm,
            horizon: 785_000,
            initial: InitialKind::UniformCube,
            init_half_width: 0.5,
            workers: 1,
            accounting: AccountingKind::TotalWork,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    pub epsilon0: f64,
    pub gamma: f64,
    /// First-iteration `mu0`; with a constant SGD step this is the step size.
    pub mu0: Mu0,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            epsilon0: 0.1,
            gamma: 0.99999,
            mu0: Mu0::Value(0.2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mu0Keyword {
    /// `epsilon0 / (1 - gamma)`.
    Auto,
}

/// A number, or `"auto"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Mu0 {
    Value(f64),
    Keyword(Mu0Keyword),
}

impl Mu0 {
    pub fn value(self) -> Option<f64> {
        match self {
            Mu0::Value(v) => Some(v),
            Mu0::Keyword(Mu0Keyword::Auto) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RoutineKind {
    #[default]
    Sgd,
    Rwt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SgdStepKind {
    Decaying,
    #[default]
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SgdStopKind {
    /// `ceil(2 beta g^2 / (alpha^2 eps))`.
    Theory,
    /// `ceil(stop_scale / eps)`.
    #[default]
    Inverse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoutineConfig {
    pub kind: RoutineKind,
    pub step: SgdStepKind,
    pub stop: SgdStopKind,
    pub stop_scale: f64,
    /// Sequential-test noise scale; the objective's largest proxy when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma0: Option<f64>,
    pub p_breve: f64,
}

impl Default for RoutineConfig {
    fn default() -> Self {
        Self {
            kind: RoutineKind::Sgd,
            step: SgdStepKind::Constant,
            stop: SgdStopKind::Inverse,
            stop_scale: 0.5,
            sigma0: None,
            p_breve: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ScdStepKind {
    /// `c1 / ceil(t / c2)`.
    #[default]
    Piecewise,
    /// `a / (b + t)`.
    InverseLinear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScdConfigSection {
    pub step: ScdStepKind,
    pub c1: f64,
    pub c2: f64,
    pub a: f64,
    pub b: f64,
}

impl Default for ScdConfigSection {
    fn default() -> Self {
        Self {
            step: ScdStepKind::Piecewise,
            c1: 5.0,
            c2: 10_000.0,
            a: 1.0,
            b: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Write the per-step CSV (large for long horizons).
    pub steps_csv: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            steps_csv: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub horizons: Vec<u64>,
    pub seeds: Vec<u64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            horizons: vec![1 << 12, 1 << 13, 1 << 14, 1 << 15],
            seeds: (0..10).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub objective: ObjectiveConfig,
    pub data: DataConfig,
    pub algorithm: AlgorithmConfig,
    pub schedule: ScheduleConfig,
    pub routine: RoutineConfig,
    pub scd: ScdConfigSection,
    pub output: OutputConfig,
    pub sweep: SweepConfig,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} = {v} must be a positive number")))
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    /// Structural checks that need no objective; the precision schedule is
    /// checked against the built objective later.
    pub fn validate(&self) -> Result<()> {
        let too_big = |v: u64| v > i64::MAX as u64;
        if too_big(self.seed) || self.sweep.seeds.iter().any(|&s| too_big(s)) {
            return Err(Error::Config(format!("seeds must not exceed {}", i64::MAX)));
        }
        if too_big(self.algorithm.horizon) || self.sweep.horizons.iter().any(|&h| too_big(h) || h == 0) {
            return Err(Error::Config("horizons must lie in 1..=2^63-1".into()));
        }
        let o = &self.objective;
        if o.kind != ObjectiveKind::Hinge {
            if o.dim == 0 {
                return Err(Error::Config("objective.dim must be at least 1".into()));
            }
            if !(o.lower < o.upper) {
                return Err(Error::Config("objective.lower must be below objective.upper".into()));
            }
        }
        if o.sigma < 0.0 || !o.sigma.is_finite() {
            return Err(Error::Config("objective.sigma must be non-negative".into()));
        }
        if o.noise == NoiseKind::HeavyTailed && !(o.tail_b > 1.0 && o.tail_b < 2.0) {
            return Err(Error::Config("objective.tail_b must lie in (1, 2)".into()));
        }
        if o.kind == ObjectiveKind::Hinge {
            positive("objective.alpha", o.alpha)?;
        }
        if self.data.digit > 9 {
            return Err(Error::Config(format!("data.digit = {} is not in 0..=9", self.data.digit)));
        }
        if self.algorithm.horizon == 0 {
            return Err(Error::Config("algorithm.horizon must be at least 1".into()));
        }
        positive("algorithm.init_half_width", self.algorithm.init_half_width)?;
        if self.algorithm.workers == 0 {
            return Err(Error::Config("algorithm.workers must be at least 1".into()));
        }
        if let Some(mu0) = self.schedule.mu0.value() {
            positive("schedule.mu0", mu0)?;
        }
        positive("routine.stop_scale", self.routine.stop_scale)?;
        if let Some(s) = self.routine.sigma0 {
            positive("routine.sigma0", s)?;
        }
        self.scd_step().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn initial_point(&self) -> InitialPoint {
        match self.algorithm.initial {
            InitialKind::Origin => InitialPoint::Origin,
            InitialKind::Lower => InitialPoint::Lower,
            InitialKind::Upper => InitialPoint::Upper,
            InitialKind::Center => InitialPoint::Center,
            InitialKind::Uniform => InitialPoint::Uniform,
            InitialKind::UniformCube => InitialPoint::UniformCube(self.algorithm.init_half_width),
        }
    }

    pub fn accounting(&self) -> SampleAccounting {
        match self.algorithm.accounting {
            AccountingKind::TotalWork => SampleAccounting::TotalWork,
            AccountingKind::WallClock => SampleAccounting::WallClock,
        }
    }

    pub fn scd_step(&self) -> Result<ScdStep> {
        let s = &self.scd;
        let step = match s.step {
            ScdStepKind::Piecewise => ScdStep::Piecewise { c1: s.c1, c2: s.c2 },
            ScdStepKind::InverseLinear => ScdStep::InverseLinear { a: s.a, b: s.b },
        };
        step.validate()?;
        Ok(step)
    }

    pub fn sgd_routine(&self) -> SgdRoutine {
        SgdRoutine {
            step: match self.routine.step {
                SgdStepKind::Decaying => StepRule::Decaying,
                SgdStepKind::Constant => StepRule::Constant,
            },
            stop: match self.routine.stop {
                SgdStopKind::Theory => StopRule::Lemma3,
                SgdStopKind::Inverse => StopRule::Inverse {
                    scale: self.routine.stop_scale,
                },
            },
        }
    }

    /// RWT needs a sub-Gaussian scale: the configured `sigma0`, else the
    /// objective's largest proxy.
    pub fn rwt_routine(&self, objective_sigma: Option<f64>) -> Result<RwtRoutine> {
        let sigma0 = match (self.routine.sigma0, objective_sigma) {
            (Some(s), _) => s,
            (None, Some(s)) if s > 0.0 => s,
            (None, Some(_)) => {
                return Err(Error::Config(
                    "noiseless objective: set routine.sigma0 for the sequential test".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config(
                    "RWT needs sub-Gaussian noise; heavy-tailed noise is not supported".into(),
                ))
            }
        };
        RwtRoutine::new(sigma0, self.routine.p_breve)
            .map_err(|e| Error::Config(e.to_string()))
    }
}
