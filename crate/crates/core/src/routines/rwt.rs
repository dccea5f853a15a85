//! Random walk on the binary interval tree, steered by sequential sign tests
//! of the restricted gradient.

use rand::RngCore;

use super::{CoordinateRoutine, IterationParams, RoutineOutcome, Termination, TraceStep};
use crate::error::{Error, Result};
use crate::objectives::Restriction;

/// Deepest node the walk will visit; dyadic endpoints stay exact in `f64`.
pub const MAX_TREE_DEPTH: u32 = 52;

fn p_breve_upper() -> f64 {
    1.0 - 2f64.powf(-1.0 / 3.0)
}

fn check_p_breve(p_breve: f64) -> Result<()> {
    if p_breve > 0.0 && p_breve < p_breve_upper() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "confidence parameter {p_breve} must lie in (0, 1 - 2^(-1/3)) = (0, {:.6})",
            p_breve_upper()
        )))
    }
}

fn check_positive(pairs: &[(&str, f64)]) -> Result<()> {
    for (name, v) in pairs {
        if !(v.is_finite() && *v > 0.0) {
            return Err(Error::InvalidArgument(format!("{name} = {v} must be positive")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwtConfig {
    /// Sub-Gaussian scale, at least the largest coordinate proxy.
    pub sigma0: f64,
    pub p_breve: f64,
    pub mu0: f64,
}

impl RwtConfig {
    pub fn new(sigma0: f64, p_breve: f64, mu0: f64) -> Result<Self> {
        check_positive(&[("sigma0", sigma0), ("mu0", mu0)])?;
        check_p_breve(p_breve)?;
        Ok(Self { sigma0, p_breve, mu0 })
    }

    /// Probability that all three tests of a node are correct.
    pub fn walk_bias(&self) -> f64 {
        (1.0 - self.p_breve).powi(3)
    }
}

/// `sqrt((5 sigma0^2 / s) ln(6 ln s / sqrt(p_breve)))`, defined for `s >= 2`.
pub fn confidence_radius(s: u64, sigma0: f64, p_breve: f64) -> Result<f64> {
    if s < 2 {
        return Err(Error::InvalidArgument(format!("confidence radius needs s >= 2, got {s}")));
    }
    let s = s as f64;
    Ok((5.0 * sigma0 * sigma0 / s * (6.0 * s.ln() / p_breve.sqrt()).ln()).sqrt())
}

/// Sample cap `N0(eps) = (40 sigma0^2/(alpha eps)) ln((2/p) ln(80 sigma0^2/(alpha p eps)))`.
pub fn rwt_n0(epsilon: f64, alpha: f64, sigma0: f64, p_breve: f64) -> Result<f64> {
    check_positive(&[("epsilon", epsilon), ("alpha", alpha), ("sigma0", sigma0)])?;
    check_p_breve(p_breve)?;
    let s2 = sigma0 * sigma0;
    let inner = (80.0 * s2 / (alpha * p_breve * epsilon)).ln();
    Ok(40.0 * s2 / (alpha * epsilon) * (2.0 / p_breve * inner).ln())
}

/// `sqrt(log2(beta/rho) * 2 mu0 / alpha)` with `rho = sqrt(alpha eps / 2)`;
/// zero when `beta <= rho`.
pub fn init_threshold(beta: f64, alpha: f64, epsilon: f64, mu0: f64) -> f64 {
    let rho = (alpha * epsilon / 2.0).sqrt();
    let levels = (beta / rho).log2();
    if levels <= 0.0 {
        0.0
    } else {
        (levels * 2.0 * mu0 / alpha).sqrt()
    }
}

/// Smallest depth whose normalized interval length is below
/// `threshold / interval_length`; the root when the threshold covers the
/// interval or when the threshold degenerates to zero.
pub fn rwt_init_depth(beta: f64, alpha: f64, epsilon: f64, mu0: f64, interval_length: f64) -> u32 {
    let threshold = init_threshold(beta, alpha, epsilon, mu0);
    depth_below(threshold / interval_length)
}

fn depth_below(normalized: f64) -> u32 {
    if !(normalized > 0.0) || normalized >= 1.0 {
        return 0;
    }
    let mut depth = 0;
    while depth < MAX_TREE_DEPTH && 0.5f64.powi(depth as i32) >= normalized {
        depth += 1;
    }
    depth
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn from_value(v: i8) -> Self {
        if v < 0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    LeftChild,
    RightChild,
    Parent,
}

/// Next move given the signs at the (left, mid, right) probes. A sign
/// change selects the child containing it; a `+` followed by a `-` cannot
/// come from a convex function and sends the walk up; uniform signs also
/// send it up (boundary nodes are handled by the walk itself).
pub fn walk_transition(signs: [Sign; 3]) -> Transition {
    use Sign::*;
    match signs {
        [Negative, Negative, Positive] => Transition::RightChild,
        [Negative, Positive, Positive] => Transition::LeftChild,
        _ => Transition::Parent,
    }
}

/// Position in the interval tree: node `index` at `depth` covers
/// `[index, index + 1] * 2^-depth` of the normalized interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RwtState {
    pub depth: u32,
    pub index: u64,
}

impl RwtState {
    pub fn root() -> Self {
        Self { depth: 0, index: 0 }
    }

    /// Node at `depth` containing the normalized point `u`.
    pub fn containing(u: f64, depth: u32) -> Self {
        let width = 1u64 << depth;
        let index = ((u.clamp(0.0, 1.0) * width as f64).floor() as u64).min(width - 1);
        Self { depth, index }
    }

    pub fn length(&self) -> f64 {
        0.5f64.powi(self.depth as i32)
    }

    pub fn left(&self) -> f64 {
        self.index as f64 * self.length()
    }

    pub fn right(&self) -> f64 {
        (self.index + 1) as f64 * self.length()
    }

    pub fn mid(&self) -> f64 {
        (self.index as f64 + 0.5) * self.length()
    }

    pub fn touches_left(&self) -> bool {
        self.index == 0
    }

    pub fn touches_right(&self) -> bool {
        self.index == (1u64 << self.depth) - 1
    }

    pub fn left_child(&self) -> Self {
        Self {
            depth: self.depth + 1,
            index: 2 * self.index,
        }
    }

    pub fn right_child(&self) -> Self {
        Self {
            depth: self.depth + 1,
            index: 2 * self.index + 1,
        }
    }

    /// The root is its own parent.
    pub fn parent(&self) -> Self {
        if self.depth == 0 {
            *self
        } else {
            Self {
                depth: self.depth - 1,
                index: self.index / 2,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestOutcome {
    Sign(Sign),
    CapExceeded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequentialTest {
    pub outcome: TestOutcome,
    pub samples: u64,
}

enum Probe {
    Decided(Sign),
    CapExceeded,
    OutOfBudget,
}

/// Runs one sequential test at `probe`, appending a trace step per draw.
fn probe_sign(
    restriction: &mut Restriction<'_>,
    probe: f64,
    cap: f64,
    config: &RwtConfig,
    budget: u64,
    trace: &mut Vec<TraceStep>,
    rng: &mut dyn RngCore,
) -> Probe {
    let loss = restriction.value_exact(probe);
    let mut sum = 0.0;
    let mut s: u64 = 0;
    loop {
        if trace.len() as u64 >= budget {
            return Probe::OutOfBudget;
        }
        sum += restriction.sample_grad(probe, rng);
        s += 1;
        trace.push(TraceStep {
            step: trace.len() as u64 + 1,
            query: probe,
            loss,
        });
        if s as f64 > cap {
            return Probe::CapExceeded;
        }
        if s >= 2 {
            let radius = confidence_radius(s, config.sigma0, config.p_breve)
                .expect("s >= 2 checked above");
            let mean = sum / s as f64;
            if mean > radius {
                return Probe::Decided(Sign::Positive);
            }
            if mean < -radius {
                return Probe::Decided(Sign::Negative);
            }
        }
    }
}

/// Sign test at a single point: draws until the running mean leaves the
/// confidence band or the draw count exceeds `cap`.
pub fn sequential_test(
    restriction: &mut Restriction<'_>,
    probe: f64,
    cap: f64,
    config: &RwtConfig,
    rng: &mut dyn RngCore,
) -> Result<SequentialTest> {
    check_positive(&[("cap", cap)])?;
    let mut trace = Vec::new();
    let outcome = match probe_sign(restriction, probe, cap, config, u64::MAX, &mut trace, rng) {
        Probe::Decided(sign) => TestOutcome::Sign(sign),
        Probe::CapExceeded => TestOutcome::CapExceeded,
        Probe::OutOfBudget => unreachable!("unbounded budget"),
    };
    Ok(SequentialTest {
        outcome,
        samples: trace.len() as u64,
    })
}

/// Depth at which a node of the restricted interval is shorter than
/// `rho / beta`, so the gradient varies by less than `rho` across it.
fn boundary_depth(restriction: &Restriction<'_>, epsilon: f64) -> u32 {
    let rho = (restriction.alpha() * epsilon / 2.0).sqrt();
    let len = restriction.hi() - restriction.lo();
    let levels = (restriction.beta() * len / rho).log2().ceil();
    if levels <= 0.0 {
        0
    } else {
        (levels as u32).min(MAX_TREE_DEPTH)
    }
}

/// One RWT coordinate minimization, stopped by the `N0(eps)` sample cap.
pub fn run_rwt(
    restriction: &mut Restriction<'_>,
    start: f64,
    epsilon: f64,
    config: &RwtConfig,
    budget: u64,
    rng: &mut dyn RngCore,
) -> Result<RoutineOutcome> {
    let cap = rwt_n0(epsilon, restriction.alpha(), config.sigma0, config.p_breve)?;
    Ok(walk(restriction, start, epsilon, cap, config, budget, rng, &mut |_| {}))
}

#[allow(clippy::too_many_arguments)]
fn walk(
    restriction: &mut Restriction<'_>,
    start: f64,
    epsilon: f64,
    cap: f64,
    config: &RwtConfig,
    budget: u64,
    rng: &mut dyn RngCore,
    visit: &mut dyn FnMut(RwtState),
) -> RoutineOutcome {
    if budget == 0 {
        return RoutineOutcome::untouched(start);
    }
    let lo = restriction.lo();
    let len = restriction.hi() - lo;
    let to_coord = |u: f64| (lo + u * len).min(lo + len);
    let start = restriction.project(start);
    let depth = rwt_init_depth(restriction.beta(), restriction.alpha(), epsilon, config.mu0, len);
    let pin_depth = boundary_depth(restriction, epsilon);
    let mut node = RwtState::containing((start - lo) / len, depth);
    let mut trace = Vec::new();

    let finish = |point: f64, trace: Vec<TraceStep>, terminated_by| RoutineOutcome {
        final_point: point,
        samples_used: trace.len() as u64,
        trace,
        terminated_by,
    };

    loop {
        visit(node);
        // Serial order: left endpoint, right endpoint, midpoint.
        let probes = [node.left(), node.right(), node.mid()];
        let mut signs = [Sign::Negative; 3];
        for (slot, u) in [0usize, 2, 1].into_iter().zip(probes) {
            let x = to_coord(u);
            match probe_sign(restriction, x, cap, config, budget, &mut trace, rng) {
                Probe::Decided(sign) => signs[slot] = sign,
                Probe::CapExceeded => return finish(x, trace, Termination::PrecisionRule),
                Probe::OutOfBudget => return finish(x, trace, Termination::BudgetExhausted),
            }
        }

        let all_neg = signs.iter().all(|&s| s == Sign::Negative);
        let all_pos = signs.iter().all(|&s| s == Sign::Positive);
        node = if all_neg && node.touches_right() {
            // Gradient negative throughout a node on the right edge: the
            // restricted minimizer sits on the upper bound.
            if node.depth >= pin_depth || node.depth >= MAX_TREE_DEPTH {
                return finish(restriction.hi(), trace, Termination::PrecisionRule);
            }
            node.right_child()
        } else if all_pos && node.touches_left() {
            if node.depth >= pin_depth || node.depth >= MAX_TREE_DEPTH {
                return finish(lo, trace, Termination::PrecisionRule);
            }
            node.left_child()
        } else {
            match walk_transition(signs) {
                Transition::LeftChild | Transition::RightChild if node.depth >= MAX_TREE_DEPTH => {
                    return finish(to_coord(node.mid()), trace, Termination::PrecisionRule);
                }
                Transition::LeftChild => node.left_child(),
                Transition::RightChild => node.right_child(),
                Transition::Parent => node.parent(),
            }
        };
    }
}

/// RWT as a PCM coordinate routine. `sigma0` defaults to the objective's
/// largest sub-Gaussian proxy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwtRoutine {
    pub sigma0: f64,
    pub p_breve: f64,
}

impl RwtRoutine {
    pub fn new(sigma0: f64, p_breve: f64) -> Result<Self> {
        RwtConfig::new(sigma0, p_breve, 1.0)?;
        Ok(Self { sigma0, p_breve })
    }

    /// Same as `run`, reporting every visited node to `visit`.
    pub fn run_observed(
        &self,
        restriction: &mut Restriction<'_>,
        start: f64,
        params: &IterationParams,
        budget: u64,
        rng: &mut dyn RngCore,
        visit: &mut dyn FnMut(RwtState),
    ) -> RoutineOutcome {
        let config = RwtConfig::new(self.sigma0, self.p_breve, params.mu0)
            .expect("validated at construction; mu0 positive");
        let cap = rwt_n0(params.epsilon, restriction.alpha(), self.sigma0, self.p_breve)
            .expect("validated at construction");
        walk(restriction, start, params.epsilon, cap, &config, budget, rng, visit)
    }
}

impl CoordinateRoutine for RwtRoutine {
    fn name(&self) -> &'static str {
        "rwt"
    }

    fn run(
        &self,
        restriction: &mut Restriction<'_>,
        start: f64,
        params: &IterationParams,
        budget: u64,
        rng: &mut dyn RngCore,
    ) -> RoutineOutcome {
        self.run_observed(restriction, start, params, budget, rng, &mut |_| {})
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{make_quadratic, BoxDomain, NoiseModel, QuadraticObjective};
    use crate::rng::{SeedStreams, Stream};
    use Sign::*;

    fn line(center: f64, lo: f64, hi: f64, sigma: f64) -> QuadraticObjective {
        make_quadratic(
            vec![1.0],
            vec![center],
            BoxDomain::cube(1, lo, hi).unwrap(),
            NoiseModel::sub_gaussian(vec![sigma]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn radius_values() {
        // mpmath: sqrt(0.05 ln(6 ln 100 / sqrt 0.1)) = 0.47277011546485142
        let r = confidence_radius(100, 1.0, 0.1).unwrap();
        assert!((r - 0.472_770_115_464_851_4).abs() < 1e-14);
        let r3 = confidence_radius(100, 3.0, 0.1).unwrap();
        assert!((r3 - 3.0 * r).abs() < 1e-14);
        assert!(confidence_radius(10_000, 1.0, 0.1).unwrap() < r);
        assert!(confidence_radius(1, 1.0, 0.1).is_err());
        assert!(confidence_radius(0, 1.0, 0.1).is_err());
    }

    #[test]
    fn n0_values() {
        // mpmath references.
        assert!((rwt_n0(0.1, 1.0, 1.0, 0.2).unwrap() - 1767.249_375_944_823_8).abs() < 1e-9);
        assert!((rwt_n0(0.01, 1.0, 1.0, 0.1).unwrap() - 21_678.521_339_032_177).abs() < 1e-8);
        let a = rwt_n0(0.2, 1.0, 1.0, 0.1).unwrap();
        let b = rwt_n0(0.1, 1.0, 1.0, 0.1).unwrap();
        // Leading factor doubles; the log factor grows slightly.
        assert!(b > 2.0 * a && b < 2.2 * a);
        assert!(rwt_n0(0.0, 1.0, 1.0, 0.1).is_err());
        assert!(rwt_n0(0.1, 1.0, 1.0, 0.25).is_err());
    }

    #[test]
    fn init_depth_values() {
        assert_eq!(rwt_init_depth(1.0, 1.0, 0.01, 1e6, 1.0), 0);
        assert_eq!(depth_below(0.3), 2);
        assert_eq!(depth_below(0.25), 3);
        assert_eq!(depth_below(1.0), 0);
        let thr = init_threshold(2.0, 1.0, 1e-4, 0.02);
        assert!((thr - 0.570_748_848_085_555_9).abs() < 1e-12);
        assert_eq!(rwt_init_depth(2.0, 1.0, 1e-4, 0.02, 1.0), 1);
        // The same threshold on an interval of length 2 is 0.285 normalized.
        assert_eq!(rwt_init_depth(2.0, 1.0, 1e-4, 0.02, 2.0), 2);
    }

    #[test]
    fn config_validation() {
        assert!(RwtConfig::new(1.0, 0.0, 1.0).is_err());
        assert!(RwtConfig::new(1.0, 0.21, 1.0).is_err());
        assert!(RwtConfig::new(0.0, 0.1, 1.0).is_err());
        let c = RwtConfig::new(1.0, 0.2, 1.0).unwrap();
        assert!(c.walk_bias() > 0.5);
    }

    #[test]
    fn transition_table_on_all_triples() {
        let table = [
            ([Negative, Negative, Negative], Transition::Parent),
            ([Negative, Negative, Positive], Transition::RightChild),
            ([Negative, Positive, Negative], Transition::Parent),
            ([Negative, Positive, Positive], Transition::LeftChild),
            ([Positive, Negative, Negative], Transition::Parent),
            ([Positive, Negative, Positive], Transition::Parent),
            ([Positive, Positive, Negative], Transition::Parent),
            ([Positive, Positive, Positive], Transition::Parent),
        ];
        for (signs, expected) in table {
            assert_eq!(walk_transition(signs), expected, "{signs:?}");
        }
    }

    #[test]
    fn tree_state_geometry() {
        let n = RwtState::containing(0.3, 3);
        assert_eq!(n, RwtState { depth: 3, index: 2 });
        assert_eq!((n.left(), n.mid(), n.right()), (0.25, 0.3125, 0.375));
        assert_eq!(n.left_child().parent(), n);
        assert_eq!(n.right_child().parent(), n);
        assert_eq!(RwtState::root().parent(), RwtState::root());
        assert_eq!(RwtState::containing(1.0, 2).index, 3);
        assert!(RwtState::containing(1.0, 2).touches_right());
    }

    #[test]
    fn noiseless_sign_test_fires_at_first_small_radius() {
        let cfg = RwtConfig::new(1.0, 0.1, 1.0).unwrap();
        let mut rng = SeedStreams::new(0).stream(Stream::Noise);
        // g(s) = s - c: gradient +0.5 at s = 0.5 for c = 0.
        let q = line(0.0, -1.0, 1.0, 0.0);
        let mut r = Restriction::new(&q, &[0.0], 0);
        let t = sequential_test(&mut r, 0.5, 1e6, &cfg, &mut rng).unwrap();
        // First s with radius(s) < 0.5 is 89 (radius(88) = 0.50239, radius(89) = 0.49970).
        assert_eq!(t, SequentialTest { outcome: TestOutcome::Sign(Positive), samples: 89 });
        let t = sequential_test(&mut r, -0.5, 1e6, &cfg, &mut rng).unwrap();
        assert_eq!(t, SequentialTest { outcome: TestOutcome::Sign(Negative), samples: 89 });
        let t = sequential_test(&mut r, 0.0, 100.0, &cfg, &mut rng).unwrap();
        assert_eq!(t, SequentialTest { outcome: TestOutcome::CapExceeded, samples: 101 });
    }

    #[test]
    fn noisy_sign_test_accuracy() {
        let p = 0.1;
        let sigma = 0.5;
        let cap = 400.0;
        let cfg = RwtConfig::new(sigma, p, 1.0).unwrap();
        let g = 2.0 * confidence_radius(cap as u64, sigma, p).unwrap();
        let q = line(-g, -1.0, 1.0, sigma);
        let mut correct = 0;
        for rep in 0..1000 {
            let mut rng = SeedStreams::new(rep).stream(Stream::Noise);
            let mut r = Restriction::new(&q, &[0.0], 0);
            let t = sequential_test(&mut r, 0.0, cap, &cfg, &mut rng).unwrap();
            if t.outcome == TestOutcome::Sign(Positive) {
                correct += 1;
            }
        }
        assert!(correct as f64 / 1000.0 >= 1.0 - p, "{correct}");
    }

    #[test]
    fn noiseless_walk_reaches_precision() {
        let q = line(0.3, 0.0, 1.0, 0.0);
        let eps = 1e-4;
        let cfg = RwtConfig::new(1.0, 0.1, 0.01).unwrap();
        let mut r = Restriction::new(&q, &[0.9], 0);
        let mut rng = SeedStreams::new(0).stream(Stream::Noise);
        let out = run_rwt(&mut r, 0.9, eps, &cfg, u64::MAX, &mut rng).unwrap();
        assert_eq!(out.terminated_by, Termination::PrecisionRule);
        let excess = 0.5 * (out.final_point - 0.3).powi(2);
        assert!(excess <= eps, "{} -> {excess}", out.final_point);
        assert!((out.final_point - 0.3).abs() <= (2.0 * eps).sqrt());
        assert_eq!(out.samples_used, out.trace.len() as u64);
    }

    #[test]
    fn walk_pins_to_boundary_minimizer() {
        // Minimizer of (s + 0.5)^2 / 2 on [0, 1] is the left end.
        let q = line(-0.5, 0.0, 1.0, 0.0);
        let cfg = RwtConfig::new(1.0, 0.1, 0.01).unwrap();
        let mut r = Restriction::new(&q, &[0.7], 0);
        let mut rng = SeedStreams::new(0).stream(Stream::Noise);
        let out = run_rwt(&mut r, 0.7, 1e-3, &cfg, u64::MAX, &mut rng).unwrap();
        assert_eq!(out.final_point, 0.0);
        assert_eq!(out.terminated_by, Termination::PrecisionRule);
        // Symmetric case on the right edge.
        let q = line(1.8, 0.0, 1.0, 0.0);
        let mut r = Restriction::new(&q, &[0.2], 0);
        let out = run_rwt(&mut r, 0.2, 1e-3, &cfg, u64::MAX, &mut rng).unwrap();
        assert_eq!(out.final_point, 1.0);
    }

    #[test]
    fn walk_moves_one_level_at_a_time() {
        let q = line(0.137, -1.0, 1.0, 0.3);
        let routine = RwtRoutine::new(0.3, 0.1).unwrap();
        let params = IterationParams { epsilon: 1e-3, mu0: 0.5 };
        for seed in 0..20 {
            let mut rng = SeedStreams::new(seed).stream(Stream::Noise);
            let mut r = Restriction::new(&q, &[0.8], 0);
            let mut visited = Vec::new();
            let out = routine.run_observed(&mut r, 0.8, &params, 200_000, &mut rng, &mut |n| visited.push(n));
            for pair in visited.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                let step = b.depth as i64 - a.depth as i64;
                assert!(step.abs() == 1 || (a == b && a.depth == 0), "{a:?} -> {b:?}");
                assert!(b.index < (1u64 << b.depth));
                assert_eq!(b.length(), 0.5f64.powi(b.depth as i32));
            }
            // Every probe lies in some visited node's interval.
            for s in &out.trace {
                let u = (s.query + 1.0) / 2.0;
                assert!(visited.iter().any(|n| n.left() <= u && u <= n.right()));
            }
        }
    }

    #[test]
    fn zero_budget_walk() {
        let q = line(0.3, 0.0, 1.0, 0.1);
        let cfg = RwtConfig::new(0.1, 0.1, 1.0).unwrap();
        let mut r = Restriction::new(&q, &[0.9], 0);
        let mut rng = SeedStreams::new(0).stream(Stream::Noise);
        let out = run_rwt(&mut r, 0.9, 1e-3, &cfg, 0, &mut rng).unwrap();
        assert_eq!((out.final_point, out.samples_used), (0.9, 0));
        let out = run_rwt(&mut r, 0.9, 1e-3, &cfg, 25, &mut rng).unwrap();
        assert_eq!(out.samples_used, 25);
        assert_eq!(out.terminated_by, Termination::BudgetExhausted);
    }
}
