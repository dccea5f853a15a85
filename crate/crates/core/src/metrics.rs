//! Pseudo-regret, growth-order diagnostics and CSV export.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::controller::RunRecord;
use crate::error::{Error, Result};
use crate::objectives::StochasticObjective;

/// Per-step excess `f(x_t) - f*` and its running sum.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretSeries {
    pub excess: Vec<f64>,
    pub cumulative: Vec<f64>,
}

impl RegretSeries {
    pub fn from_values(values: impl IntoIterator<Item = f64>, f_star: f64) -> Self {
        let excess: Vec<f64> = values.into_iter().map(|f| (f - f_star).max(0.0)).collect();
        let mut acc = 0.0;
        let cumulative = excess
            .iter()
            .map(|e| {
                acc += e;
                acc
            })
            .collect();
        Self { excess, cumulative }
    }

    pub fn len(&self) -> usize {
        self.excess.len()
    }

    pub fn is_empty(&self) -> bool {
        self.excess.is_empty()
    }

    /// Cumulative regret after `t` steps; 0 for `t = 0`.
    pub fn at(&self, t: usize) -> f64 {
        if t == 0 {
            0.0
        } else {
            self.cumulative[t.min(self.len()) - 1]
        }
    }

    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}

/// Excess values are clamped at zero so an approximate `f*` slightly above
/// the true optimum cannot make the series decrease.
pub fn pseudo_regret(run: &RunRecord, objective: &dyn StochasticObjective) -> Result<RegretSeries> {
    let f_star = objective.minimizer().ok_or(Error::MissingMinimizer)?.value;
    Ok(RegretSeries::from_values(run.steps.iter().map(|s| s.f_exact), f_star))
}

pub fn mean_and_standard_error(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogFit {
    /// `R(T_{j+1}) - R(T_j)`; constant under logarithmic growth.
    pub differences: Vec<f64>,
    /// Consecutive ratios of `differences`; 1 for log growth, the grid ratio
    /// for linear growth.
    pub difference_ratios: Vec<f64>,
    /// Least-squares fit `R = intercept + slope ln T`.
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
    /// Least-squares slope of `ln R` against `ln T`; meaningful when all
    /// regrets are positive, NaN otherwise.
    pub power_exponent: f64,
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (my - slope * mx, slope, r2)
}

/// Growth diagnostics over a geometric horizon grid.
pub fn fit_log_regret(horizons: &[f64], regrets: &[f64]) -> Result<LogFit> {
    if horizons.len() != regrets.len() || horizons.len() < 3 {
        return Err(Error::InvalidArgument(
            "need at least 3 (horizon, regret) pairs of equal length".into(),
        ));
    }
    if horizons.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
        return Err(Error::InvalidArgument("horizons must be positive".into()));
    }
    let ratio = horizons[1] / horizons[0];
    let geometric = ratio > 1.0
        && horizons
            .windows(2)
            .all(|w| ((w[1] / w[0]) / ratio - 1.0).abs() < 1e-9);
    if !geometric {
        return Err(Error::InvalidArgument(format!(
            "horizon grid {horizons:?} is not increasing geometric"
        )));
    }
    let differences: Vec<f64> = regrets.windows(2).map(|w| w[1] - w[0]).collect();
    let difference_ratios = differences.windows(2).map(|w| w[1] / w[0]).collect();
    let logs: Vec<f64> = horizons.iter().map(|h| h.ln()).collect();
    let (intercept, slope, r_squared) = least_squares(&logs, regrets);
    let power_exponent = if regrets.iter().all(|&r| r > 0.0) {
        let lr: Vec<f64> = regrets.iter().map(|r| r.ln()).collect();
        least_squares(&logs, &lr).1
    } else {
        f64::NAN
    };
    Ok(LogFit {
        differences,
        difference_ratios,
        intercept,
        slope,
        r_squared,
        power_exponent,
    })
}

/// `max{f(x0) - f*, epsilon0 / (1 - gamma)}`.
pub fn decay_constant(initial_excess: f64, epsilon0: f64, gamma: f64) -> f64 {
    initial_excess.max(epsilon0 / (1.0 - gamma))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCheck {
    pub pass: bool,
    /// `min_k (bound_k - e_k) / bound_k` with `bound_k = F0 gamma^k`;
    /// zero when the envelope is met with equality.
    pub margin: f64,
    pub worst_k: usize,
}

/// Checks `excesses[k] <= F0 gamma^k (1 + tolerance)` for every `k`,
/// with `k = 0` the initial point.
pub fn geometric_decay_check(excesses: &[f64], gamma: f64, f0: f64, tolerance: f64) -> DecayCheck {
    let mut margin = f64::INFINITY;
    let mut worst_k = 0;
    for (k, &e) in excesses.iter().enumerate() {
        let bound = f0 * gamma.powi(k as i32);
        let m = (bound - e) / bound;
        if m < margin {
            margin = m;
            worst_k = k;
        }
    }
    DecayCheck {
        pass: margin >= -tolerance,
        margin,
        worst_k,
    }
}

/// Coordinate switches: iterations for PCM, rounds in parallel mode, steps
/// for coordinate descent.
pub fn count_switches(run: &RunRecord) -> u64 {
    run.iteration_count()
}

pub const RUN_CSV_HEADER: &str = "t,k,coordinate,epsilon_k,f_exact,excess,cum_regret";
pub const SWEEP_CSV_HEADER: &str = "T,seed,final_regret,K,switches";

pub fn run_csv(run: &RunRecord, f_star: f64) -> String {
    let series = RegretSeries::from_values(run.steps.iter().map(|s| s.f_exact), f_star);
    let mut out = String::with_capacity(64 * run.steps.len() + 64);
    out.push_str(RUN_CSV_HEADER);
    out.push('\n');
    for (j, s) in run.steps.iter().enumerate() {
        let eps = s.epsilon.map(|e| e.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.t, s.k, s.coord, eps, s.f_exact, series.excess[j], series.cumulative[j]
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub horizon: u64,
    pub seed: u64,
    pub final_regret: f64,
    pub iterations: u64,
    pub switches: u64,
}

/// Rows sorted by `(T, seed)` so parallel sweeps merge deterministically.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut rows = rows.to_vec();
    rows.sort_by_key(|r| (r.horizon, r.seed));
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.horizon, r.seed, r.final_regret, r.iterations, r.switches
        );
    }
    out
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))
}

/// Writes the per-step CSV for `run`.
pub fn export_csv(run: &RunRecord, f_star: f64, path: &Path) -> Result<()> {
    write_text(path, &run_csv(run, f_star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controller::{Algorithm, IterationRecord, StepRecord};
    use proptest::prelude::*;

    fn constant_run(f: f64, t: u64, iterations: u64) -> RunRecord {
        RunRecord {
            algorithm: Algorithm::Pcm,
            horizon: t,
            initial: vec![0.0],
            f_initial: f,
            steps: (1..=t)
                .map(|t| StepRecord {
                    t,
                    k: 1,
                    coord: 0,
                    query: 0.0,
                    epsilon: Some(0.5),
                    f_exact: f,
                })
                .collect(),
            iterations: (1..=iterations)
                .map(|k| IterationRecord {
                    k,
                    epsilon: Some(0.5),
                    mu0: None,
                    updates: vec![],
                    start_t: 1,
                    samples: 1,
                    truncated: false,
                    f_after: f,
                    worker_values: vec![],
                })
                .collect(),
            final_point: vec![0.0],
            samples_charged: t,
        }
    }

    #[test]
    fn constant_trajectories() {
        let at_opt = RegretSeries::from_values(vec![1.0; 10], 1.0);
        assert!(at_opt.cumulative.iter().all(|&c| c == 0.0));
        let off = RegretSeries::from_values(vec![1.5; 10], 1.0);
        assert_eq!(off.total(), 5.0);
        assert_eq!(off.at(0), 0.0);
        assert_eq!(off.at(4), 2.0);
        // Slight f* overshoot cannot create negative excess.
        let clamp = RegretSeries::from_values(vec![1.0, 0.999_999], 1.0);
        assert_eq!(clamp.total(), 0.0);
    }

    #[test]
    fn log_series_has_constant_differences() {
        let hs: Vec<f64> = (10..15).map(|p| 2f64.powi(p)).collect();
        let rs: Vec<f64> = hs.iter().map(|h| 7.0 * h.ln()).collect();
        let fit = fit_log_regret(&hs, &rs).unwrap();
        for d in &fit.differences {
            assert!((d - 7.0 * 2f64.ln()).abs() < 1e-9);
        }
        assert!((fit.differences[0] - 4.852).abs() < 1e-3);
        assert!((fit.slope - 7.0).abs() < 1e-9 && fit.intercept.abs() < 1e-8);
        for r in &fit.difference_ratios {
            assert!((r - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn linear_series_doubles() {
        let hs: Vec<f64> = (10..15).map(|p| 2f64.powi(p)).collect();
        let fit = fit_log_regret(&hs, &hs).unwrap();
        for r in &fit.difference_ratios {
            assert!((r - 2.0).abs() < 1e-12);
        }
        assert!((fit.power_exponent - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_grids() {
        assert!(fit_log_regret(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(fit_log_regret(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(fit_log_regret(&[4.0, 2.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(fit_log_regret(&[1.0, 2.0, 4.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn decay_envelope() {
        let gamma: f64 = 0.9;
        let f0 = 3.0;
        let exact: Vec<f64> = (0..30).map(|k| f0 * gamma.powi(k)).collect();
        let c = geometric_decay_check(&exact, gamma, f0, 0.25);
        assert!(c.pass && c.margin.abs() < 1e-12);
        let mut bad = exact.clone();
        bad[1] = 2.0 * f0;
        let c = geometric_decay_check(&bad, gamma, f0, 0.25);
        assert!(!c.pass);
        assert_eq!(c.worst_k, 1);
        assert!((decay_constant(2.0, 0.5, 0.95) - 10.0).abs() < 1e-12);
        assert_eq!(decay_constant(12.0, 0.5, 0.95), 12.0);
    }

    #[test]
    fn switch_counts() {
        assert_eq!(count_switches(&constant_run(1.0, 40, 37)), 37);
    }

    #[test]
    fn csv_layout() {
        let mut run = constant_run(1.5, 2, 1);
        run.steps[1].epsilon = None;
        let csv = run_csv(&run, 1.0);
        assert_eq!(
            csv,
            "t,k,coordinate,epsilon_k,f_exact,excess,cum_regret\n1,1,0,0.5,1.5,0.5,0.5\n2,1,0,,1.5,0.5,1\n"
        );
        let rows = [
            SweepRow { horizon: 8, seed: 1, final_regret: 2.5, iterations: 3, switches: 3 },
            SweepRow { horizon: 4, seed: 2, final_regret: 1.0, iterations: 2, switches: 2 },
            SweepRow { horizon: 4, seed: 0, final_regret: 0.5, iterations: 2, switches: 2 },
        ];
        assert_eq!(
            sweep_csv(&rows),
            "T,seed,final_regret,K,switches\n4,0,0.5,2,2\n4,2,1,2,2\n8,1,2.5,3,3\n"
        );
    }

    #[test]
    fn standard_error_shrinks_with_replications() {
        let xs: Vec<f64> = (0..400).map(|i| ((i * 7919) % 101) as f64).collect();
        let (_, se_small) = mean_and_standard_error(&xs[..100]);
        let (_, se_large) = mean_and_standard_error(&xs);
        assert!(se_large < se_small);
        assert_eq!(mean_and_standard_error(&[2.0]), (2.0, 0.0));
    }

    proptest! {
        #[test]
        fn series_is_nondecreasing(values in proptest::collection::vec(-5.0f64..5.0, 1..200), f_star in -5.0f64..5.0) {
            let s = RegretSeries::from_values(values.clone(), f_star);
            prop_assert!(s.cumulative.windows(2).all(|w| w[1] >= w[0]));
            let zero = values.iter().all(|&v| v <= f_star);
            prop_assert_eq!(s.total() == 0.0, zero);
        }

        #[test]
        fn power_law_exponent_is_recovered(q in 0.1f64..2.0, c in 0.1f64..10.0) {
            let hs: Vec<f64> = (8..14).map(|p| 2f64.powi(p)).collect();
            let rs: Vec<f64> = hs.iter().map(|h| c * h.powf(q)).collect();
            let fit = fit_log_regret(&hs, &rs).unwrap();
            prop_assert!((fit.power_exponent - q).abs() < 0.05);
        }
    }
}
