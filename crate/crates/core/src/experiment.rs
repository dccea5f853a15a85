//! Command drivers: build the objective a config describes, run the chosen
//! algorithm, and write CSV and summary files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::config::{AlgorithmKind, Config, DataSource, NoiseKind, ObjectiveKind, RoutineKind};
use crate::controller::{run_parallel_pcm, run_pcm, PcmSettings, RunRecord};
use crate::dataset_io::{load_mnist, mnist_files, synth_classification, DATA_DIR_ENV};
use crate::error::{Error, Result};
use crate::metrics::{count_switches, fit_log_regret, run_csv, sweep_csv, write_text, LogFit, RegretSeries, SweepRow};
use crate::objectives::{
    make_dense_quadratic, make_hinge, make_l1_quadratic, make_quadratic, reference_center, BoxDomain, Dataset,
    NoiseModel, StochasticObjective,
};
use crate::oracle::{OracleSettings, OracleSolution};
use crate::rng::{SeedStreams, Stream};
use crate::routines::CoordinateRoutine;
use crate::scd::{run_scd, ScdConfig};

/// What to do when the objective has no closed-form minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimizerPolicy {
    /// Use `objective.minimizer_file`, else fail.
    Require,
    /// Use the file when given, else run the oracle in-process.
    Solve,
    /// Leave it unset.
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataOrigin {
    Mnist(PathBuf),
    Synthetic,
}

pub fn data_dir(config: &Config) -> Option<PathBuf> {
    config
        .data
        .dir
        .clone()
        .or_else(|| std::env::var_os(DATA_DIR_ENV).map(PathBuf::from))
}

/// Loads (or synthesizes) the classification data; subsampling and
/// synthesis draw from the `seed`'s subsample stream.
pub fn load_dataset(config: &Config, seed: u64) -> Result<(Dataset, DataOrigin)> {
    let data = &config.data;
    let mut rng = SeedStreams::new(seed).stream(Stream::Subsample);
    let dir = data_dir(config);
    let found = dir.as_deref().and_then(mnist_files).map(|_| dir.clone().unwrap());
    match (data.source, found) {
        (DataSource::Mnist | DataSource::Auto, Some(dir)) => {
            let set = load_mnist(&dir, data.digit, data.limit, &mut rng)?;
            Ok((set, DataOrigin::Mnist(dir)))
        }
        (DataSource::Mnist, None) => Err(Error::Config(format!(
            "MNIST files not found; set data.dir or {DATA_DIR_ENV}, or use data.source = \"synth\""
        ))),
        (DataSource::Auto | DataSource::Synth, _) => {
            let n = data.limit.unwrap_or(data.synth_records);
            let (set, _) = synth_classification(n, data.synth_dim, data.synth_margin, &mut rng)?;
            Ok((set, DataOrigin::Synthetic))
        }
    }
}

fn noise_model(config: &Config, dim: usize) -> Result<NoiseModel> {
    let o = &config.objective;
    match o.noise {
        NoiseKind::SubGaussian => NoiseModel::sub_gaussian(vec![o.sigma; dim]),
        NoiseKind::HeavyTailed => NoiseModel::heavy_tailed(o.tail_b, o.tail_scale),
    }
}

fn read_minimizer(path: &Path, expected_hash: Option<String>, dim: usize) -> Result<OracleSolution> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let sol = OracleSolution::from_toml(&text)?;
    if sol.dataset_hash != expected_hash {
        return Err(Error::MinimizerMismatch {
            path: path.to_path_buf(),
            expected: expected_hash.unwrap_or_else(|| "none".into()),
            found: sol.dataset_hash.unwrap_or_else(|| "none".into()),
        });
    }
    if sol.x.len() != dim {
        return Err(Error::Config(format!(
            "{}: minimizer has dimension {}, objective has {dim}",
            path.display(),
            sol.x.len()
        )));
    }
    Ok(sol)
}

fn resolve_minimizer(
    config: &Config,
    objective: &dyn StochasticObjective,
    policy: MinimizerPolicy,
) -> Result<Option<OracleSolution>> {
    if objective.minimizer().is_some() || policy == MinimizerPolicy::Skip {
        return Ok(None);
    }
    match (&config.objective.minimizer_file, policy) {
        (Some(path), _) => read_minimizer(path, objective.dataset_hash(), objective.dim()).map(Some),
        (None, MinimizerPolicy::Solve) => objective.solve_minimizer(&OracleSettings::default()).map(Some),
        (None, _) => Err(Error::MissingMinimizer),
    }
}

/// Builds the configured objective. Data-backed objectives draw their data
/// from `seed`.
pub fn build_objective(
    config: &Config,
    seed: u64,
    policy: MinimizerPolicy,
) -> Result<Box<dyn StochasticObjective>> {
    let o = &config.objective;
    if o.kind == ObjectiveKind::Hinge {
        let (data, _) = load_dataset(config, seed)?;
        return hinge_objective(config, data, policy);
    }
    let d = o.dim;
    let domain = BoxDomain::cube(d, o.lower, o.upper)?;
    let noise = noise_model(config, d)?;
    let center = o.center.clone().unwrap_or_else(|| match o.kind {
        ObjectiveKind::ReferenceQuadratic => reference_center(d),
        _ => vec![0.0; d],
    });
    let curvature = || {
        o.curvature
            .clone()
            .ok_or_else(|| Error::Config("objective.curvature is required for this kind".into()))
    };
    let mut q = match o.kind {
        ObjectiveKind::ReferenceQuadratic => make_quadratic(vec![1.0; d], center, domain, noise)?,
        ObjectiveKind::Quadratic => make_quadratic(curvature()?, center, domain, noise)?,
        ObjectiveKind::L1Quadratic => make_l1_quadratic(curvature()?, center, o.lambda, domain, noise)?,
        ObjectiveKind::DenseQuadratic => {
            let a = o
                .matrix
                .clone()
                .ok_or_else(|| Error::Config("objective.matrix is required for dense_quadratic".into()))?;
            make_dense_quadratic(a, center, domain, noise)?
        }
        ObjectiveKind::Hinge => unreachable!("handled above"),
    };
    if let Some(g) = o.g_max {
        q = q.with_g_max(g)?;
    }
    Ok(match resolve_minimizer(config, &q, policy)? {
        Some(sol) => Box::new(q.with_minimizer(sol.minimizer())),
        None => Box::new(q),
    })
}

/// The hinge objective on already loaded data.
pub fn hinge_objective(
    config: &Config,
    data: Dataset,
    policy: MinimizerPolicy,
) -> Result<Box<dyn StochasticObjective>> {
    let h = make_hinge(Arc::new(data), config.objective.alpha)?;
    Ok(match resolve_minimizer(config, &h, policy)? {
        Some(sol) => Box::new(h.with_minimizer(sol.minimizer())),
        None => Box::new(h),
    })
}

pub fn build_routine(config: &Config, objective: &dyn StochasticObjective) -> Result<Box<dyn CoordinateRoutine>> {
    Ok(match config.routine.kind {
        RoutineKind::Sgd => Box::new(config.sgd_routine()),
        RoutineKind::Rwt => Box::new(config.rwt_routine(objective.sigma_max())?),
    })
}

pub fn pcm_settings(config: &Config, horizon: u64) -> PcmSettings {
    PcmSettings {
        epsilon0: config.schedule.epsilon0,
        gamma: config.schedule.gamma,
        horizon,
        mu0: config.schedule.mu0.value(),
        initial: config.initial_point(),
    }
}

pub fn run_pcm_algorithm(
    config: &Config,
    objective: &dyn StochasticObjective,
    horizon: u64,
    seed: u64,
) -> Result<RunRecord> {
    let routine = build_routine(config, objective)?;
    let settings = pcm_settings(config, horizon);
    let streams = SeedStreams::new(seed);
    match config.algorithm.workers {
        1 => run_pcm(objective, routine.as_ref(), &settings, &streams),
        m => run_parallel_pcm(objective, routine.as_ref(), &settings, m, config.accounting(), &streams),
    }
}

pub fn run_scd_algorithm(
    config: &Config,
    objective: &dyn StochasticObjective,
    horizon: u64,
    seed: u64,
) -> Result<RunRecord> {
    let scd = ScdConfig {
        step: config.scd_step()?,
        horizon,
        initial: config.initial_point(),
    };
    run_scd(objective, &scd, &SeedStreams::new(seed))
}

/// Runs the configured algorithm on `objective` for `horizon` samples.
pub fn run_algorithm(
    config: &Config,
    objective: &dyn StochasticObjective,
    horizon: u64,
    seed: u64,
) -> Result<RunRecord> {
    match config.algorithm.kind {
        AlgorithmKind::Pcm => run_pcm_algorithm(config, objective, horizon, seed),
        AlgorithmKind::Scd => run_scd_algorithm(config, objective, horizon, seed),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub iterations: u64,
    pub switches: u64,
    pub samples: u64,
    pub f_star: f64,
    pub final_excess: f64,
    pub cumulative_regret: f64,
}

impl RunSummary {
    pub fn new(run: &RunRecord, f_star: f64, objective: &dyn StochasticObjective) -> Self {
        let series = RegretSeries::from_values(run.steps.iter().map(|s| s.f_exact), f_star);
        Self {
            iterations: run.iteration_count(),
            switches: count_switches(run),
            samples: run.samples_charged,
            f_star,
            final_excess: (objective.value_exact(&run.final_point) - f_star).max(0.0),
            cumulative_regret: series.total(),
        }
    }

    fn write_comments(&self, prefix: &str, out: &mut String) {
        let _ = writeln!(out, "# {prefix}iterations = {}", self.iterations);
        let _ = writeln!(out, "# {prefix}switches = {}", self.switches);
        let _ = writeln!(out, "# {prefix}samples = {}", self.samples);
        let _ = writeln!(out, "# {prefix}f_star = {}", self.f_star);
        let _ = writeln!(out, "# {prefix}final_excess = {}", self.final_excess);
        let _ = writeln!(out, "# {prefix}cumulative_regret = {}", self.cumulative_regret);
    }
}

fn prepare_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// The effective config followed by result lines as TOML comments, so the
/// file itself re-parses to the config.
fn summary_text(config: &Config, results: &str) -> String {
    format!("{}\n# ---- results ----\n{results}", config.to_toml())
}

fn f_star_of(objective: &dyn StochasticObjective) -> Result<f64> {
    Ok(objective.minimizer().ok_or(Error::MissingMinimizer)?.value)
}

/// Single run: `steps.csv` and `summary.txt` in `out_dir`.
pub fn cmd_run(config: &Config, out_dir: &Path) -> Result<RunSummary> {
    let objective = build_objective(config, config.seed, MinimizerPolicy::Require)?;
    let f_star = f_star_of(objective.as_ref())?;
    let run = run_algorithm(config, objective.as_ref(), config.algorithm.horizon, config.seed)?;
    let summary = RunSummary::new(&run, f_star, objective.as_ref());
    prepare_dir(out_dir)?;
    if config.output.steps_csv {
        write_text(&out_dir.join("steps.csv"), &run_csv(&run, f_star))?;
    }
    let mut results = String::new();
    summary.write_comments("", &mut results);
    write_text(&out_dir.join("summary.txt"), &summary_text(config, &results))?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Per-horizon means over seeds of the final regret and of `K`.
    pub mean_regret: Vec<f64>,
    pub mean_iterations: Vec<f64>,
    pub fit: LogFit,
}

fn sweep_one(config: &Config, horizon: u64, seed: u64) -> Result<SweepRow> {
    let objective = build_objective(config, seed, MinimizerPolicy::Require)?;
    let f_star = f_star_of(objective.as_ref())?;
    let run = run_algorithm(config, objective.as_ref(), horizon, seed)?;
    let series = RegretSeries::from_values(run.steps.iter().map(|s| s.f_exact), f_star);
    Ok(SweepRow {
        horizon,
        seed,
        final_regret: series.total(),
        iterations: run.iteration_count(),
        switches: count_switches(&run),
    })
}

/// Runs every `(T, seed)` pair of the sweep section, seeds in parallel.
pub fn sweep(config: &Config) -> Result<SweepReport> {
    let horizons = &config.sweep.horizons;
    let seeds = &config.sweep.seeds;
    if horizons.len() < 3 {
        return Err(Error::Config("sweep.horizons needs at least 3 entries".into()));
    }
    if seeds.len() < 5 {
        return Err(Error::Config("sweep.seeds needs at least 5 entries".into()));
    }
    let grid: Vec<f64> = horizons.iter().map(|&h| h as f64).collect();
    // Validates the grid before any work is done.
    fit_log_regret(&grid, &vec![1.0; grid.len()]).map_err(|e| Error::Config(e.to_string()))?;

    let jobs: Vec<(u64, u64)> = horizons
        .iter()
        .flat_map(|&h| seeds.iter().map(move |&s| (h, s)))
        .collect();
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len());
    let mut results: Vec<Option<Result<SweepRow>>> = (0..jobs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (chunk_id, slots) in results.chunks_mut(jobs.len().div_ceil(threads)).enumerate() {
            let start = chunk_id * jobs.len().div_ceil(threads);
            let jobs = &jobs;
            scope.spawn(move || {
                for (j, slot) in slots.iter_mut().enumerate() {
                    let (h, s) = jobs[start + j];
                    *slot = Some(sweep_one(config, h, s));
                }
            });
        }
    });
    let rows = results
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect::<Result<Vec<_>>>()?;

    let mean_of = |h: u64, f: &dyn Fn(&SweepRow) -> f64| {
        let vals: Vec<f64> = rows.iter().filter(|r| r.horizon == h).map(f).collect();
        vals.iter().sum::<f64>() / vals.len() as f64
    };
    let mean_regret: Vec<f64> = horizons.iter().map(|&h| mean_of(h, &|r| r.final_regret)).collect();
    let mean_iterations = horizons.iter().map(|&h| mean_of(h, &|r| r.iterations as f64)).collect();
    let fit = fit_log_regret(&grid, &mean_regret)?;
    Ok(SweepReport {
        rows,
        mean_regret,
        mean_iterations,
        fit,
    })
}

fn list(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn diagnostics_text(report: &SweepReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# mean_final_regret = [{}]", list(&report.mean_regret));
    let _ = writeln!(out, "# mean_iterations = [{}]", list(&report.mean_iterations));
    let _ = writeln!(out, "# regret_differences = [{}]", list(&report.fit.differences));
    let _ = writeln!(out, "# difference_ratios = [{}]", list(&report.fit.difference_ratios));
    let _ = writeln!(
        out,
        "# log_fit = {} + {} ln T (r^2 = {})",
        report.fit.intercept, report.fit.slope, report.fit.r_squared
    );
    let _ = writeln!(out, "# power_exponent = {}", report.fit.power_exponent);
    out
}

/// Sweep: `sweep.csv` plus diagnostics in `summary.txt`.
pub fn cmd_sweep(config: &Config, out_dir: &Path) -> Result<SweepReport> {
    let report = sweep(config)?;
    prepare_dir(out_dir)?;
    write_text(&out_dir.join("sweep.csv"), &sweep_csv(&report.rows))?;
    write_text(&out_dir.join("summary.txt"), &summary_text(config, &diagnostics_text(&report)))?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MnistReport {
    pub origin: DataOrigin,
    pub records: usize,
    pub dim: usize,
    pub pcm: RunSummary,
    pub scd: RunSummary,
}

/// PCM and coordinate descent on the same one-vs-rest data. Without a
/// minimizer file the oracle runs first.
pub fn mnist_experiment(config: &Config) -> Result<(MnistReport, RunRecord, RunRecord)> {
    let mut config = config.clone();
    config.objective.kind = ObjectiveKind::Hinge;
    let (data, origin) = load_dataset(&config, config.seed)?;
    let records = data.len();
    let objective = hinge_objective(&config, data, MinimizerPolicy::Solve)?;
    let f_star = f_star_of(objective.as_ref())?;
    let horizon = config.algorithm.horizon;
    let pcm = run_pcm_algorithm(&config, objective.as_ref(), horizon, config.seed)?;
    let scd = run_scd_algorithm(&config, objective.as_ref(), horizon, config.seed)?;
    let report = MnistReport {
        origin,
        records,
        dim: objective.dim(),
        pcm: RunSummary::new(&pcm, f_star, objective.as_ref()),
        scd: RunSummary::new(&scd, f_star, objective.as_ref()),
    };
    Ok((report, pcm, scd))
}

pub fn cmd_mnist(config: &Config, out_dir: &Path) -> Result<MnistReport> {
    let (report, pcm, scd) = mnist_experiment(config)?;
    prepare_dir(out_dir)?;
    if config.output.steps_csv {
        write_text(&out_dir.join("pcm_steps.csv"), &run_csv(&pcm, report.pcm.f_star))?;
        write_text(&out_dir.join("scd_steps.csv"), &run_csv(&scd, report.scd.f_star))?;
    }
    let mut results = String::new();
    let _ = writeln!(
        results,
        "# data = {}",
        match &report.origin {
            DataOrigin::Mnist(dir) => format!("mnist ({})", dir.display()),
            DataOrigin::Synthetic => "synthetic".into(),
        }
    );
    report.pcm.write_comments("pcm_", &mut results);
    report.scd.write_comments("scd_", &mut results);
    write_text(&out_dir.join("summary.txt"), &summary_text(config, &results))?;
    Ok(report)
}

/// Solves for the minimizer and writes `minimizer.toml`.
pub fn cmd_oracle(config: &Config, out_dir: &Path) -> Result<OracleSolution> {
    let objective = build_objective(config, config.seed, MinimizerPolicy::Skip)?;
    let sol = objective.solve_minimizer(&OracleSettings::default())?;
    prepare_dir(out_dir)?;
    write_text(&out_dir.join("minimizer.toml"), &sol.to_toml())?;
    Ok(sol)
}
