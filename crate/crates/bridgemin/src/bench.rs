//! Benchmark of non-adaptive black-box optimization strategies on bridge
//! paths.
//!
//! A strategy picks `n` sampling times in (0, 1) up front. A replicate
//! reveals the path values at those times sequentially (each draw
//! conditioned on the values already revealed), estimates the path's true
//! minimum by Monte Carlo on the revealed knots, and scores the strategy by
//! `best sampled value - estimated true minimum`. Equidistant and uniform-
//! random points are scored against the same replicate path; the
//! equal-probability strategy gets an independent path unless
//! [`BenchConfig::couple_eqp`] is set.
//!
//! Replicates are independent given their substreams (`stream = replicate
//! index`), so a parallel map over replicates reproduces the serial results.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::analytic::argmin_density;
use crate::math;
use crate::model::{Knots, KnotsError, Segment, DUPLICATE_TIME_TOL};
use crate::quadrature::integrate_adaptive;
use crate::rng::RngHandle;
use crate::sampler::{sample_bridge_point, simulate_global_min, SamplerError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// Equidistant points `k/(n+1)`.
    Eqd,
    /// Independent uniforms on (0, 1), redrawn per replicate.
    Rnd,
    /// Points splitting `[0, 1]` into intervals with equal probability of
    /// hosting the minimum's location.
    Eqp,
}

impl StrategyKind {
    pub fn name(&self) -> &'static str {
        match self {
            StrategyKind::Eqd => "eqd",
            StrategyKind::Rnd => "rnd",
            StrategyKind::Eqp => "eqp",
        }
    }
}

impl core::str::FromStr for StrategyKind {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eqd" => Ok(StrategyKind::Eqd),
            "rnd" => Ok(StrategyKind::Rnd),
            "eqp" => Ok(StrategyKind::Eqp),
            _ => Err("expected eqd | rnd | eqp"),
        }
    }
}

/// A strategy instance: kind plus its sampling budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Strategy {
    pub kind: StrategyKind,
    pub n_points: usize,
}

impl Strategy {
    pub fn new(kind: StrategyKind, n_points: usize) -> Self {
        Strategy { kind, n_points }
    }
}

/// Benchmark controls. `bridge` is the initial bridge on `[0, 1]`; the
/// strategies carry their own point budgets.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub bridge: Segment,
    /// Replicates of the reveal-estimate-difference cycle.
    pub replicates: usize,
    /// Monte Carlo draws behind each true-minimum estimate.
    pub inner_min_samples: usize,
    /// Confidence level of the reported normal-theory intervals.
    pub level: f64,
    pub seed: u64,
    /// Reveal the equal-probability points on the same path as the other
    /// strategies instead of an independent one. Off by default: the
    /// coupled pair is equidistant-vs-random.
    pub couple_eqp: bool,
}

impl BenchConfig {
    pub fn new(bridge: Segment, replicates: usize, inner_min_samples: usize, seed: u64) -> Self {
        BenchConfig {
            bridge,
            replicates,
            inner_min_samples,
            level: 0.95,
            seed,
            couple_eqp: false,
        }
    }
}

/// Per-strategy benchmark outcome.
#[derive(Debug, Clone)]
pub struct StrategyReport {
    pub strategy: Strategy,
    /// One error per replicate: best sampled value minus estimated true
    /// minimum.
    pub errors: Vec<f64>,
    pub mean: f64,
    /// Sample variance (n - 1 denominator).
    pub variance: f64,
    /// Asymptotic normal interval `mean ± z * sd / sqrt(replicates)`.
    pub ci: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BenchError {
    BadConfig(&'static str),
    /// A requested sampling time lies outside the open bridge interval.
    PointOutOfRange { t: f64 },
    /// A requested sampling time collides with an already-revealed one.
    DuplicatePoint { t: f64 },
    /// The equal-probability point construction did not converge for this
    /// bridge.
    EqpUnsupported,
    Knots(KnotsError),
    Sampler(SamplerError),
}

impl From<KnotsError> for BenchError {
    fn from(e: KnotsError) -> Self {
        BenchError::Knots(e)
    }
}

impl From<SamplerError> for BenchError {
    fn from(e: SamplerError) -> Self {
        BenchError::Sampler(e)
    }
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::BadConfig(msg) => write!(f, "{msg}"),
            BenchError::PointOutOfRange { t } => {
                write!(f, "sampling time {t} outside the open bridge interval")
            }
            BenchError::DuplicatePoint { t } => {
                write!(f, "sampling time {t} already revealed")
            }
            BenchError::EqpUnsupported => {
                write!(f, "equal-probability points not available for this bridge")
            }
            BenchError::Knots(e) => write!(f, "{e}"),
            BenchError::Sampler(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for BenchError {}

/// Equidistant interior points `k/(n+1)`, `k = 1..n`.
pub fn eqd_points(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / (n + 1) as f64).collect()
}

/// Interior points `t_1 < ... < t_n` splitting the bridge's interval into
/// `n + 1` pieces of equal probability of hosting the minimum's location.
///
/// Symmetric bridges have a uniform location law, so the points reduce to
/// the equidistant ones. Otherwise the location-density CDF is inverted by
/// bisection to 1e-10 in `t`; the CDF itself is integrated with the
/// inverse-square-root endpoint singularity substituted away
/// (`s = endpoint ± u^2`).
pub fn eqp_points(bridge: &Segment, n: usize) -> Result<Vec<f64>, BenchError> {
    if n < 1 {
        return Err(BenchError::BadConfig("need at least one point"));
    }
    if bridge.gap() == 0.0 {
        return Ok((1..=n)
            .map(|k| bridge.t_lo() + bridge.length() * k as f64 / (n + 1) as f64)
            .collect());
    }

    let cdf = |t: f64| argmin_cdf(bridge, t);
    let mut out = Vec::with_capacity(n);
    let mut lo_init = bridge.t_lo();
    for k in 1..=n {
        let target = k as f64 / (n + 1) as f64;
        // The CDF is strictly increasing, so earlier points are valid lower
        // brackets for later ones.
        let mut lo = lo_init;
        let mut hi = bridge.t_hi();
        for _ in 0..200 {
            if hi - lo < 1e-10 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if cdf(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        if !(t > bridge.t_lo() && t < bridge.t_hi()) {
            return Err(BenchError::EqpUnsupported);
        }
        out.push(t);
        lo_init = lo;
    }
    Ok(out)
}

/// CDF of the minimum-location density of `bridge` at `t`, integrating away
/// from the singular (lower-valued) endpoint with the `u^2` substitution.
fn argmin_cdf(bridge: &Segment, t: f64) -> f64 {
    if t <= bridge.t_lo() {
        return 0.0;
    }
    if t >= bridge.t_hi() {
        return 1.0;
    }
    let singular_at_lo = bridge.x_lo() <= bridge.x_hi();
    if singular_at_lo {
        let a = bridge.t_lo();
        let f = |u: f64| 2.0 * u * argmin_density(bridge, a + u * u);
        let (v, _, _, _) = integrate_adaptive(&f, 0.0, libm::sqrt(t - a), 1e-10, 1_000_000);
        v
    } else {
        let b = bridge.t_hi();
        let f = |u: f64| 2.0 * u * argmin_density(bridge, b - u * u);
        let (v, _, _, _) = integrate_adaptive(&f, 0.0, libm::sqrt(b - t), 1e-10, 1_000_000);
        1.0 - v
    }
}

/// Sequentially reveals the bridge's values at `points` (in the given
/// order): each new time is sampled from the sub-bridge between its two
/// nearest already-revealed neighbours, which reproduces the joint law of
/// the path at those times. Returns all revealed `(t, x)` pairs including
/// the endpoints, sorted by time.
pub fn reveal_path(
    points: &[f64],
    bridge: &Segment,
    rng: &mut RngHandle,
) -> Result<Vec<(f64, f64)>, BenchError> {
    let mut state = RevealState::new(bridge);
    for &t in points {
        state.reveal_new(t, rng)?;
    }
    Ok(state.rows)
}

struct RevealState {
    rows: Vec<(f64, f64)>,
}

impl RevealState {
    fn new(bridge: &Segment) -> Self {
        RevealState {
            rows: vec![
                (bridge.t_lo(), bridge.x_lo()),
                (bridge.t_hi(), bridge.x_hi()),
            ],
        }
    }

    fn span(&self) -> (f64, f64) {
        (self.rows[0].0, self.rows[self.rows.len() - 1].0)
    }

    fn collides(&self, t: f64) -> bool {
        let pos = self.rows.partition_point(|&(rt, _)| rt < t);
        (pos < self.rows.len() && (self.rows[pos].0 - t).abs() < DUPLICATE_TIME_TOL)
            || (pos > 0 && (t - self.rows[pos - 1].0).abs() < DUPLICATE_TIME_TOL)
    }

    /// Reveals a strictly new time; collisions are an error.
    fn reveal_new(&mut self, t: f64, rng: &mut RngHandle) -> Result<f64, BenchError> {
        let (lo, hi) = self.span();
        if !(t > lo && t < hi) {
            return Err(BenchError::PointOutOfRange { t });
        }
        if self.collides(t) {
            return Err(BenchError::DuplicatePoint { t });
        }
        let pos = self.rows.partition_point(|&(rt, _)| rt < t);
        let (lt, lx) = self.rows[pos - 1];
        let (rt, rx) = self.rows[pos];
        let sub = Segment::new(lt, rt, lx, rx).expect("neighbours are strictly ordered");
        let x = sample_bridge_point(&sub, t, rng)?;
        self.rows.insert(pos, (t, x));
        Ok(x)
    }

    /// Reveals a time, reusing the stored value if it is already known
    /// (strategies sharing a path may request overlapping grids).
    fn reveal_or_get(&mut self, t: f64, rng: &mut RngHandle) -> Result<f64, BenchError> {
        let pos = self.rows.partition_point(|&(rt, _)| rt < t);
        if pos < self.rows.len() && (self.rows[pos].0 - t).abs() < DUPLICATE_TIME_TOL {
            return Ok(self.rows[pos].1);
        }
        if pos > 0 && (t - self.rows[pos - 1].0).abs() < DUPLICATE_TIME_TOL {
            return Ok(self.rows[pos - 1].1);
        }
        self.reveal_new(t, rng)
    }
}

/// Conditional-expectation estimate of the path's true minimum given the
/// revealed values: the mean of `inner_samples` exact global-minimum draws
/// from the process pinned at every revealed point.
pub fn estimate_true_min(
    revealed: &[(f64, f64)],
    inner_samples: usize,
    rng: &mut RngHandle,
) -> Result<f64, BenchError> {
    if inner_samples < 1 {
        return Err(BenchError::BadConfig("need at least one inner sample"));
    }
    let knots = Knots::from_rows(revealed)?;
    let mut acc = 0.0;
    for _ in 0..inner_samples {
        acc += simulate_global_min(&knots, rng).value;
    }
    Ok(acc / inner_samples as f64)
}

/// Runs the full benchmark: per replicate, reveal every coupled strategy's
/// points on one shared path (equidistant first, then random, then
/// equal-probability when coupled), estimate the true minimum from all
/// revealed points, and score each strategy by its own best sampled value
/// (endpoints included) minus that estimate. Uncoupled equal-probability
/// strategies repeat the cycle on an independent path.
pub fn run_benchmark(
    cfg: &BenchConfig,
    strategies: &[Strategy],
) -> Result<Vec<StrategyReport>, BenchError> {
    if strategies.is_empty() {
        return Err(BenchError::BadConfig("need at least one strategy"));
    }
    if cfg.replicates < 2 {
        return Err(BenchError::BadConfig("need at least two replicates"));
    }
    if cfg.inner_min_samples < 1 {
        return Err(BenchError::BadConfig("need at least one inner sample"));
    }
    if !(cfg.level > 0.0 && cfg.level < 1.0) {
        return Err(BenchError::BadConfig("level must lie in (0, 1)"));
    }
    if cfg.bridge.t_lo() != 0.0 || cfg.bridge.t_hi() != 1.0 {
        return Err(BenchError::BadConfig("benchmark bridge must span [0, 1]"));
    }
    if strategies.iter().any(|s| s.n_points < 1) {
        return Err(BenchError::BadConfig("every strategy needs at least one point"));
    }

    // Fixed point sets are shared by all replicates.
    let fixed: Vec<Option<Vec<f64>>> = strategies
        .iter()
        .map(|s| match s.kind {
            StrategyKind::Eqd => Ok(Some(eqd_points(s.n_points))),
            StrategyKind::Eqp => eqp_points(&cfg.bridge, s.n_points).map(Some),
            StrategyKind::Rnd => Ok(None),
        })
        .collect::<Result<_, _>>()?;

    // Reveal order within a shared path: eqd, then rnd, then eqp.
    let rank = |k: StrategyKind| match k {
        StrategyKind::Eqd => 0,
        StrategyKind::Rnd => 1,
        StrategyKind::Eqp => 2,
    };
    let mut order: Vec<usize> = (0..strategies.len()).collect();
    order.sort_by_key(|&i| rank(strategies[i].kind));
    let (shared, solo): (Vec<usize>, Vec<usize>) = order
        .iter()
        .partition(|&&i| strategies[i].kind != StrategyKind::Eqp || cfg.couple_eqp);

    let endpoint_best = cfg.bridge.x_lo().min(cfg.bridge.x_hi());
    let mut errors: Vec<Vec<f64>> = vec![Vec::with_capacity(cfg.replicates); strategies.len()];

    for replicate in 0..cfg.replicates {
        let mut rng = RngHandle::substream(cfg.seed, replicate as u64);

        let mut run_group = |group: &[usize], rng: &mut RngHandle| -> Result<(), BenchError> {
            if group.is_empty() {
                return Ok(());
            }
            let mut path = RevealState::new(&cfg.bridge);
            let mut best = vec![endpoint_best; group.len()];
            for (gi, &si) in group.iter().enumerate() {
                let strat = strategies[si];
                match &fixed[si] {
                    Some(points) => {
                        for &t in points {
                            let x = path.reveal_or_get(t, rng)?;
                            best[gi] = best[gi].min(x);
                        }
                    }
                    None => {
                        for _ in 0..strat.n_points {
                            // Uniform resample on (probability-zero)
                            // collisions with already-revealed times.
                            let t = loop {
                                let t = rng.uniform_open01();
                                if !path.collides(t) {
                                    break t;
                                }
                            };
                            let x = path.reveal_new(t, rng)?;
                            best[gi] = best[gi].min(x);
                        }
                    }
                }
            }
            let estimate = estimate_true_min(&path.rows, cfg.inner_min_samples, rng)?;
            for (gi, &si) in group.iter().enumerate() {
                errors[si].push(best[gi] - estimate);
            }
            Ok(())
        };

        run_group(&shared, &mut rng)?;
        run_group(&solo, &mut rng)?;
    }

    let z = math::inv_norm_cdf(0.5 * (1.0 + cfg.level));
    Ok(strategies
        .iter()
        .zip(errors)
        .map(|(&strategy, errs)| summarize(strategy, errs, z))
        .collect())
}

fn summarize(strategy: Strategy, errors: Vec<f64>, z: f64) -> StrategyReport {
    let n = errors.len() as f64;
    let mean = errors.iter().sum::<f64>() / n;
    let ss: f64 = errors.iter().map(|e| (e - mean) * (e - mean)).sum();
    let variance = ss / (n - 1.0);
    let half = z * libm::sqrt(variance / n);
    StrategyReport { strategy, errors, mean, variance, ci: (mean - half, mean + half) }
}

/// Mean-error ratios equidistant/random over a grid of point budgets. The
/// ratio sits below 1 (equidistant wins) and decreases toward its known
/// large-`n` limit around 0.82.
pub fn strategy_ratio_trend(
    cfg: &BenchConfig,
    ns: &[usize],
) -> Result<Vec<(usize, f64)>, BenchError> {
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let reports = run_benchmark(
            cfg,
            &[
                Strategy::new(StrategyKind::Eqd, n),
                Strategy::new(StrategyKind::Rnd, n),
            ],
        )?;
        out.push((n, reports[0].mean / reports[1].mean));
    }
    Ok(out)
}
