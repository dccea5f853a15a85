//! The progressive outer loop: random coordinate selection, geometrically
//! shrinking precision, and iterate stitching. Also the parallel averaging
//! variant where `m` workers minimize distinct coordinates from a shared
//! anchor.

use rand::seq::index;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::objectives::{BoxDomain, Restriction, StochasticObjective};
use crate::rng::{SeedStreams, Stream, StreamRng};
use crate::routines::{CoordinateRoutine, IterationParams, RoutineOutcome, Termination};

/// `sqrt(1 - alpha/(d beta))`, the smallest admissible decay rate.
pub fn gamma_lower_bound(alpha: f64, beta: f64, dim: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= beta && beta.is_finite()) || dim == 0 {
        return Err(Error::InvalidArgument(format!(
            "need 0 < alpha <= beta and d >= 1 (alpha = {alpha}, beta = {beta}, d = {dim})"
        )));
    }
    Ok((1.0 - alpha / (dim as f64 * beta)).max(0.0).sqrt())
}

/// `epsilon_k = epsilon0 * gamma^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionSchedule {
    pub epsilon0: f64,
    pub gamma: f64,
}

impl PrecisionSchedule {
    pub fn new(epsilon0: f64, gamma: f64) -> Result<Self> {
        if !(epsilon0.is_finite() && epsilon0 > 0.0) {
            return Err(Error::InvalidArgument(format!("epsilon0 = {epsilon0} must be positive")));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidArgument(format!("gamma = {gamma} must lie in (0, 1)")));
        }
        Ok(Self { epsilon0, gamma })
    }

    pub fn epsilon(&self, k: u64) -> f64 {
        self.epsilon0 * self.gamma.powf(k as f64)
    }

    /// `epsilon0 / (1 - gamma)`, used as the default first-iteration `mu0`.
    pub fn initial_mu0(&self) -> f64 {
        self.epsilon0 / (1.0 - self.gamma)
    }
}

/// Checks `gamma` against the admissible interval `[lower, 1)` for this
/// objective. Accepts unvalidated values so configs can be checked raw.
pub fn validate_schedule(
    epsilon0: f64,
    gamma: f64,
    objective: &dyn StochasticObjective,
) -> Result<PrecisionSchedule> {
    let (alpha, beta, dim) = (objective.alpha(), objective.beta(), objective.dim());
    let lower_bound = gamma_lower_bound(alpha, beta, dim)?;
    if !(gamma >= lower_bound && gamma < 1.0 && epsilon0 > 0.0 && epsilon0.is_finite()) {
        return Err(Error::Schedule {
            gamma,
            epsilon0,
            lower_bound,
            alpha,
            beta,
            dim,
        });
    }
    PrecisionSchedule::new(epsilon0, gamma)
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialPoint {
    /// The origin projected onto the domain.
    Origin,
    Lower,
    Upper,
    Center,
    /// Uniform over the box, drawn from the `Init` stream.
    Uniform,
    /// Uniform over `[-h, h]^d` intersected with the box.
    UniformCube(f64),
    Point(Vec<f64>),
}

impl InitialPoint {
    pub fn resolve(&self, domain: &BoxDomain, rng: &mut dyn RngCore) -> Result<Vec<f64>> {
        let d = domain.dim();
        match self {
            InitialPoint::Origin => domain.project(&vec![0.0; d]),
            InitialPoint::Lower => Ok((0..d).map(|i| domain.lo(i)).collect()),
            InitialPoint::Upper => Ok((0..d).map(|i| domain.hi(i)).collect()),
            InitialPoint::Center => Ok(domain.center()),
            InitialPoint::Uniform => Ok((0..d)
                .map(|i| domain.lo(i) + domain.width(i) * rng.random::<f64>())
                .collect()),
            &InitialPoint::UniformCube(h) => (0..d)
                .map(|i| {
                    let (lo, hi) = (domain.lo(i).max(-h), domain.hi(i).min(h));
                    if !(lo <= hi) {
                        return Err(Error::InvalidArgument(format!(
                            "initial cube [-{h}, {h}] misses the domain in coordinate {i}"
                        )));
                    }
                    Ok(lo + (hi - lo) * rng.random::<f64>())
                })
                .collect(),
            InitialPoint::Point(x) => {
                if x.len() != d || !domain.contains(x) {
                    return Err(Error::InvalidArgument(format!(
                        "initial point must be a {d}-vector inside the domain"
                    )));
                }
                Ok(x.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcmSettings {
    pub epsilon0: f64,
    pub gamma: f64,
    /// Total sample budget `T`.
    pub horizon: u64,
    /// First-iteration `mu0`; defaults to `epsilon0 / (1 - gamma)`.
    pub mu0: Option<f64>,
    pub initial: InitialPoint,
}

/// How parallel workers are charged against the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleAccounting {
    /// Every worker's draws count; a round's remaining budget is split.
    #[default]
    TotalWork,
    /// A round costs its slowest worker's draws; each worker may use the
    /// full remaining budget.
    WallClock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Pcm,
    ParallelPcm { workers: usize },
    Scd,
}

/// One noisy gradient query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// 1-based global sample index.
    pub t: u64,
    /// 1-based iteration (round) index.
    pub k: u64,
    pub coord: usize,
    /// Value of `coord` at the query; other coordinates are the anchor's.
    pub query: f64,
    /// Iteration precision; `None` for coordinate descent.
    pub epsilon: Option<f64>,
    /// Exact objective value at the full query point.
    pub f_exact: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: u64,
    pub epsilon: Option<f64>,
    pub mu0: Option<f64>,
    /// Coordinates changed at the end of the iteration, with new values.
    pub updates: Vec<(usize, f64)>,
    /// Global index of the first sample of this iteration.
    pub start_t: u64,
    pub samples: u64,
    pub truncated: bool,
    /// Exact objective value of the committed iterate.
    pub f_after: f64,
    /// Parallel rounds: exact values of each worker's full output point.
    pub worker_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub horizon: u64,
    pub initial: Vec<f64>,
    pub f_initial: f64,
    pub steps: Vec<StepRecord>,
    pub iterations: Vec<IterationRecord>,
    pub final_point: Vec<f64>,
    /// Samples charged against the horizon.
    pub samples_charged: u64,
}

impl RunRecord {
    /// Number of committed iterations `K` (rounds in parallel mode, steps
    /// for coordinate descent).
    pub fn iteration_count(&self) -> u64 {
        self.iterations.len() as u64
    }

    /// Replays the committed iterates `x^(0), x^(1), ...`.
    pub fn iterates(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        let mut x = self.initial.clone();
        std::iter::once(x.clone()).chain(self.iterations.iter().map(move |it| {
            for &(i, v) in &it.updates {
                x[i] = v;
            }
            x.clone()
        }))
    }
}

fn check_horizon(horizon: u64) -> Result<()> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon T must be at least 1".into()));
    }
    Ok(())
}

fn first_mu0(settings: &PcmSettings, schedule: &PrecisionSchedule) -> Result<f64> {
    let mu0 = settings.mu0.unwrap_or_else(|| schedule.initial_mu0());
    if !(mu0.is_finite() && mu0 > 0.0) {
        return Err(Error::InvalidArgument(format!("mu0 = {mu0} must be positive")));
    }
    Ok(mu0)
}

fn push_trace(
    steps: &mut Vec<StepRecord>,
    outcome: &RoutineOutcome,
    k: u64,
    coord: usize,
    epsilon: f64,
) {
    let base = steps.len() as u64;
    steps.extend(outcome.trace.iter().enumerate().map(|(j, s)| StepRecord {
        t: base + j as u64 + 1,
        k,
        coord,
        query: s.query,
        epsilon: Some(epsilon),
        f_exact: s.loss,
    }));
}

fn stalled(routine: &dyn CoordinateRoutine) -> Error {
    Error::InvalidArgument(format!("routine `{}` consumed no samples", routine.name()))
}

/// Serial PCM until `settings.horizon` samples are spent. The final
/// iteration may be cut short; its partial output is still committed.
pub fn run_pcm(
    objective: &dyn StochasticObjective,
    routine: &dyn CoordinateRoutine,
    settings: &PcmSettings,
    streams: &SeedStreams,
) -> Result<RunRecord> {
    let schedule = validate_schedule(settings.epsilon0, settings.gamma, objective)?;
    check_horizon(settings.horizon)?;
    let mut mu0 = first_mu0(settings, &schedule)?;
    let x0 = settings
        .initial
        .resolve(objective.domain(), &mut streams.stream(Stream::Init))?;
    let mut coord_rng = streams.stream(Stream::Coordinates);
    let mut noise_rng = streams.stream(Stream::Noise);

    let d = objective.dim();
    let mut x = x0.clone();
    let mut tracker = objective.tracker(&x);
    let f_initial = tracker.value();
    let mut steps = Vec::new();
    let mut iterations = Vec::new();
    let mut used = 0u64;
    let mut k = 0u64;

    while used < settings.horizon {
        k += 1;
        if k > 1 {
            mu0 *= schedule.gamma;
        }
        let epsilon = schedule.epsilon(k);
        let coord = coord_rng.random_range(0..d);
        let budget = settings.horizon - used;
        let mut restriction = Restriction::with_tracker(objective, &x, coord, tracker);
        let outcome = routine.run(
            &mut restriction,
            x[coord],
            &IterationParams { epsilon, mu0 },
            budget,
            &mut noise_rng,
        );
        tracker = restriction
            .into_tracker(outcome.final_point)
            .expect("restriction was built with a tracker");
        if outcome.samples_used == 0 {
            return Err(stalled(routine));
        }
        x[coord] = outcome.final_point;
        push_trace(&mut steps, &outcome, k, coord, epsilon);
        iterations.push(IterationRecord {
            k,
            epsilon: Some(epsilon),
            mu0: Some(mu0),
            updates: vec![(coord, outcome.final_point)],
            start_t: used + 1,
            samples: outcome.samples_used,
            truncated: outcome.terminated_by == Termination::BudgetExhausted,
            f_after: tracker.value(),
            worker_values: Vec::new(),
        });
        used += outcome.samples_used;
    }

    Ok(RunRecord {
        algorithm: Algorithm::Pcm,
        horizon: settings.horizon,
        initial: x0,
        f_initial,
        steps,
        iterations,
        final_point: x,
        samples_charged: used,
    })
}

fn worker_rng(streams: &SeedStreams, j: usize) -> StreamRng {
    // Worker 0 shares the serial noise stream so a single worker replays
    // serial PCM exactly.
    if j == 0 {
        streams.stream(Stream::Noise)
    } else {
        streams.stream(Stream::Worker(j))
    }
}

/// Draws `m` distinct coordinates, uniformly over the `m`-subsets.
fn draw_coordinates(rng: &mut StreamRng, d: usize, m: usize) -> Vec<usize> {
    if m == 1 {
        vec![rng.random_range(0..d)]
    } else {
        index::sample(rng, d, m).into_vec()
    }
}

/// Parallel PCM: each round, `workers` routines run from the same anchor on
/// distinct coordinates and the next iterate is the average of their full
/// output points.
pub fn run_parallel_pcm(
    objective: &dyn StochasticObjective,
    routine: &dyn CoordinateRoutine,
    settings: &PcmSettings,
    workers: usize,
    accounting: SampleAccounting,
    streams: &SeedStreams,
) -> Result<RunRecord> {
    let d = objective.dim();
    if workers == 0 || workers > d {
        return Err(Error::InvalidArgument(format!(
            "worker count {workers} must lie in 1..={d}"
        )));
    }
    let schedule = validate_schedule(settings.epsilon0, settings.gamma, objective)?;
    check_horizon(settings.horizon)?;
    let mut mu0 = first_mu0(settings, &schedule)?;
    let x0 = settings
        .initial
        .resolve(objective.domain(), &mut streams.stream(Stream::Init))?;
    let mut coord_rng = streams.stream(Stream::Coordinates);
    let mut rngs: Vec<StreamRng> = (0..workers).map(|j| worker_rng(streams, j)).collect();

    let m = workers as u64;
    let mut x = x0.clone();
    let f_initial = objective.value_exact(&x);
    let mut steps = Vec::new();
    let mut iterations = Vec::new();
    let mut used = 0u64;
    let mut k = 0u64;

    while used < settings.horizon {
        k += 1;
        if k > 1 {
            mu0 *= schedule.gamma;
        }
        let epsilon = schedule.epsilon(k);
        let coords = draw_coordinates(&mut coord_rng, d, workers);
        let remaining = settings.horizon - used;
        let budgets: Vec<u64> = (0..m)
            .map(|j| match accounting {
                SampleAccounting::TotalWork => remaining / m + u64::from(j < remaining % m),
                SampleAccounting::WallClock => remaining,
            })
            .collect();
        let params = IterationParams { epsilon, mu0 };
        let anchor = &x;

        let run_worker = |coord: usize, budget: u64, rng: &mut StreamRng| {
            let mut r = Restriction::tracked(objective, anchor, coord);
            let outcome = routine.run(&mut r, anchor[coord], &params, budget, rng);
            let value = r.value_exact(outcome.final_point);
            (outcome, value)
        };
        let results: Vec<(RoutineOutcome, f64)> = if workers == 1 {
            vec![run_worker(coords[0], budgets[0], &mut rngs[0])]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = coords
                    .iter()
                    .zip(&budgets)
                    .zip(rngs.iter_mut())
                    .map(|((&c, &b), rng)| scope.spawn(move || run_worker(c, b, rng)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker panicked"))
                    .collect()
            })
        };

        let start_t = steps.len() as u64 + 1;
        let mut charged = 0u64;
        let mut updates = Vec::with_capacity(workers);
        for (&coord, (outcome, _)) in coords.iter().zip(&results) {
            if outcome.samples_used == 0 && budgets.iter().all(|&b| b > 0) {
                return Err(stalled(routine));
            }
            push_trace(&mut steps, outcome, k, coord, epsilon);
            charged = match accounting {
                SampleAccounting::TotalWork => charged + outcome.samples_used,
                SampleAccounting::WallClock => charged.max(outcome.samples_used),
            };
            // The m output points differ from the anchor in one coordinate
            // each, so the average keeps the anchor's value with weight
            // (m - 1)/m there.
            let v = (outcome.final_point + (workers - 1) as f64 * x[coord]) / workers as f64;
            updates.push((coord, v));
        }
        if charged == 0 {
            return Err(stalled(routine));
        }
        let truncated = results.iter().zip(&budgets).any(|((o, _), &b)| {
            o.terminated_by == Termination::BudgetExhausted && o.samples_used == b
        });
        for &(i, v) in &updates {
            x[i] = v;
        }
        iterations.push(IterationRecord {
            k,
            epsilon: Some(epsilon),
            mu0: Some(mu0),
            updates,
            start_t,
            samples: charged,
            truncated,
            f_after: objective.value_exact(&x),
            worker_values: results.iter().map(|(_, v)| *v).collect(),
        });
        used += charged;
    }

    Ok(RunRecord {
        algorithm: Algorithm::ParallelPcm { workers },
        horizon: settings.horizon,
        initial: x0,
        f_initial,
        steps,
        iterations,
        final_point: x,
        samples_charged: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{make_quadratic, reference_quadratic, NoiseModel};
    use crate::routines::{RwtRoutine, SgdRoutine, StepRule, StopRule};
    use proptest::prelude::*;

    fn settings(horizon: u64, gamma: f64) -> PcmSettings {
        PcmSettings {
            epsilon0: 0.5,
            gamma,
            horizon,
            mu0: None,
            initial: InitialPoint::Lower,
        }
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(gamma_lower_bound(1.0, 1.0, 1).unwrap(), 0.0);
        assert!((gamma_lower_bound(1.0, 2.0, 4).unwrap() - 0.935_414_346_693_485_5).abs() < 1e-15);
        let mut prev = 0.0;
        for d in 1..200 {
            let b = gamma_lower_bound(1.0, 3.0, d).unwrap();
            assert!(b > prev && b < 1.0);
            prev = b;
        }
        assert!(gamma_lower_bound(2.0, 1.0, 3).is_err());
        assert!(gamma_lower_bound(1.0, 1.0, 0).is_err());
    }

    #[test]
    fn schedule_validation() {
        let q = make_quadratic(
            vec![1.0, 2.0, 2.0, 2.0],
            vec![0.0; 4],
            BoxDomain::cube(4, -1.0, 1.0).unwrap(),
            NoiseModel::noiseless(4),
        )
        .unwrap();
        assert!(validate_schedule(0.1, 0.95, &q).is_ok());
        match validate_schedule(0.1, 0.5, &q) {
            Err(Error::Schedule { lower_bound, .. }) => {
                assert!((lower_bound - 0.935_414_346_693_485_5).abs() < 1e-15)
            }
            other => panic!("{other:?}"),
        }
        let err = validate_schedule(0.1, 1.0, &q).unwrap_err();
        assert!(err.to_string().contains("1)"), "{err}");
        assert!(validate_schedule(0.0, 0.95, &q).is_err());
        assert!(validate_schedule(f64::NAN, 0.95, &q).is_err());
    }

    #[test]
    fn precision_ratio_is_gamma() {
        let s = PrecisionSchedule::new(0.5, 0.95).unwrap();
        for k in 1..500 {
            let r = s.epsilon(k) / s.epsilon(k - 1);
            assert!((r - 0.95).abs() < 1e-13);
        }
        assert!((s.initial_mu0() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn samples_are_conserved_and_iterates_change_one_coordinate() {
        let q = reference_quadratic(10, 0.1).unwrap();
        let run = run_pcm(&q, &SgdRoutine::default(), &settings(5000, 0.95), &SeedStreams::new(3))
            .unwrap();
        assert_eq!(run.samples_charged, 5000);
        assert_eq!(run.steps.len(), 5000);
        assert_eq!(run.iterations.iter().map(|i| i.samples).sum::<u64>(), 5000);
        for w in run.iterations.windows(2) {
            assert!(w[1].start_t > w[0].start_t);
            assert!(!w[0].truncated);
        }
        let xs: Vec<_> = run.iterates().collect();
        assert_eq!(xs.len() as u64, run.iteration_count() + 1);
        for (w, it) in xs.windows(2).zip(&run.iterations) {
            let changed: Vec<_> = (0..10).filter(|&i| w[0][i] != w[1][i]).collect();
            assert!(changed.len() <= 1);
            assert!((q.value_exact(&w[1]) - it.f_after).abs() < 1e-12);
        }
        assert_eq!(xs.last().unwrap(), &run.final_point);
        for s in &run.steps {
            let it = &run.iterations[s.k as usize - 1];
            assert!(s.t >= it.start_t && s.t < it.start_t + it.samples);
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let q = reference_quadratic(6, 0.2).unwrap();
        let rwt = RwtRoutine::new(0.2, 0.1).unwrap();
        let a = run_pcm(&q, &rwt, &settings(20_000, 0.95), &SeedStreams::new(7)).unwrap();
        let b = run_pcm(&q, &rwt, &settings(20_000, 0.95), &SeedStreams::new(7)).unwrap();
        assert_eq!(a, b);
        let c = run_pcm(&q, &rwt, &settings(20_000, 0.95), &SeedStreams::new(8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn one_dimensional_pcm_converges() {
        let q = make_quadratic(
            vec![1.0],
            vec![0.3],
            BoxDomain::cube(1, -1.0, 1.0).unwrap(),
            NoiseModel::noiseless(1),
        )
        .unwrap();
        let rwt = RwtRoutine::new(1.0, 0.1).unwrap();
        let run = run_pcm(&q, &rwt, &settings(200_000, 0.5), &SeedStreams::new(0)).unwrap();
        let last_full = run.iterations.iter().rev().find(|i| !i.truncated).unwrap();
        assert!(last_full.f_after <= last_full.epsilon.unwrap());
    }

    #[test]
    fn coordinate_frequencies_are_uniform() {
        let q = reference_quadratic(5, 0.0).unwrap();
        let routine = SgdRoutine {
            step: StepRule::Constant,
            stop: StopRule::Inverse { scale: 1e-9 },
        };
        // epsilon_k stays far above the scale, so every iteration is one step.
        let mut s = settings(20_000, 0.9999);
        s.mu0 = Some(0.1);
        let run = run_pcm(&q, &routine, &s, &SeedStreams::new(11)).unwrap();
        // One sample per iteration, so K = T.
        assert_eq!(run.iteration_count(), 20_000);
        let mut counts = [0f64; 5];
        for it in &run.iterations {
            counts[it.updates[0].0] += 1.0;
        }
        let expected = 4000.0;
        let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
        // 0.999 quantile of chi-square with 4 degrees of freedom.
        assert!(chi2 < 18.467, "{chi2}");
    }

    #[test]
    fn single_worker_matches_serial() {
        let q = reference_quadratic(4, 0.1).unwrap();
        let sgd = SgdRoutine::default();
        let s = settings(3000, 0.95);
        let serial = run_pcm(&q, &sgd, &s, &SeedStreams::new(5)).unwrap();
        let par = run_parallel_pcm(&q, &sgd, &s, 1, SampleAccounting::TotalWork, &SeedStreams::new(5))
            .unwrap();
        assert_eq!(serial.steps, par.steps);
        assert_eq!(serial.final_point, par.final_point);
        assert_eq!(serial.iteration_count(), par.iteration_count());
    }

    #[test]
    fn parallel_rounds_average_and_respect_convexity() {
        let q = reference_quadratic(8, 0.1).unwrap();
        let sgd = SgdRoutine::default();
        let s = settings(40_000, 0.97);
        let a = run_parallel_pcm(&q, &sgd, &s, 4, SampleAccounting::TotalWork, &SeedStreams::new(2))
            .unwrap();
        let b = run_parallel_pcm(&q, &sgd, &s, 4, SampleAccounting::TotalWork, &SeedStreams::new(2))
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples_charged, 40_000);
        for it in &a.iterations {
            let mut cs: Vec<_> = it.updates.iter().map(|u| u.0).collect();
            cs.sort_unstable();
            cs.dedup();
            assert_eq!(cs.len(), 4);
            let avg = it.worker_values.iter().sum::<f64>() / 4.0;
            assert!(it.f_after <= avg + 1e-12);
        }
        assert!(run_parallel_pcm(&q, &sgd, &s, 9, SampleAccounting::TotalWork, &SeedStreams::new(2))
            .is_err());
        let w = run_parallel_pcm(&q, &sgd, &s, 2, SampleAccounting::WallClock, &SeedStreams::new(2))
            .unwrap();
        assert!(w.steps.len() as u64 >= w.samples_charged);
    }

    #[test]
    fn averaging_two_unit_moves() {
        // Anchor 0, workers move coordinates 0 and 1 to 1: average (0.5, 0.5).
        let x = [0.0, 0.0];
        let ys = [[1.0, 0.0], [0.0, 1.0]];
        let avg: Vec<f64> = (0..2).map(|i| (ys[0][i] + ys[1][i]) / 2.0).collect();
        let via_updates: Vec<f64> = (0..2).map(|i| (1.0 + x[i]) / 2.0).collect();
        assert_eq!(avg, via_updates);
    }

    #[test]
    fn invalid_inputs() {
        let q = reference_quadratic(3, 0.1).unwrap();
        let sgd = SgdRoutine::default();
        assert!(run_pcm(&q, &sgd, &settings(0, 0.95), &SeedStreams::new(0)).is_err());
        assert!(run_pcm(&q, &sgd, &settings(10, 1.0), &SeedStreams::new(0)).is_err());
        let mut s = settings(10, 0.95);
        s.initial = InitialPoint::Point(vec![5.0, 0.0, 0.0]);
        assert!(run_pcm(&q, &sgd, &s, &SeedStreams::new(0)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn horizon_is_spent_exactly(seed in 0u64..1000, horizon in 1u64..3000) {
            let q = reference_quadratic(3, 0.3).unwrap();
            let run = run_pcm(&q, &SgdRoutine::default(), &settings(horizon, 0.9), &SeedStreams::new(seed)).unwrap();
            prop_assert_eq!(run.samples_charged, horizon);
            prop_assert_eq!(run.steps.len() as u64, horizon);
            prop_assert!(run.iterations.iter().rev().skip(1).all(|i| !i.truncated));
            prop_assert!(q.domain().contains(&run.final_point));
        }
    }
}
