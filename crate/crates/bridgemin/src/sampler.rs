//! Exact simulation of the global minimum, of its location, and of bridge
//! path values, plus frequency estimation with simultaneous confidence
//! intervals.
//!
//! Nothing here discretizes paths: segment minima come from the explicit
//! inverse CDF, locations from acceptance/rejection against the bounded
//! conditional density, so every draw follows the target law exactly.
//! All operations are pure functions of their inputs and the [`RngHandle`]
//! state; replicate-level parallelism hands each worker its own substream.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::analytic::{
    argmin_cond_coeffs, argmin_cond_mode, bridge_min_inverse_cdf, AnalyticError,
};
use crate::math;
use crate::model::{Knots, Segment};
use crate::rng::RngHandle;

/// Proposal budget for one acceptance/rejection draw; the expected number of
/// proposals is `length * f_max`, so running this out signals a broken
/// envelope rather than bad luck.
const MAX_AR_PROPOSALS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum SamplerError {
    /// Acceptance/rejection exceeded [`MAX_AR_PROPOSALS`].
    EnvelopeExceeded,
    /// Propagated domain error from the analytic layer.
    Analytic(AnalyticError),
    /// Histogram/KDE input was empty or had fewer than 2 bins.
    BadHistogramRequest,
    /// All samples identical: bandwidth selection is undefined.
    DegenerateSample,
    /// Evaluation time outside the open bridge interval.
    PointOutsideBridge { t: f64 },
    /// Frequency report needs at least 100 draws for its intervals to mean
    /// anything.
    TooFewDraws,
}

impl From<AnalyticError> for SamplerError {
    fn from(e: AnalyticError) -> Self {
        SamplerError::Analytic(e)
    }
}

impl fmt::Display for SamplerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplerError::EnvelopeExceeded => {
                write!(f, "acceptance/rejection exceeded its proposal budget")
            }
            SamplerError::Analytic(e) => write!(f, "{e}"),
            SamplerError::BadHistogramRequest => {
                write!(f, "histogram needs nonempty samples and at least 2 bins")
            }
            SamplerError::DegenerateSample => {
                write!(f, "all samples identical; bandwidth undefined")
            }
            SamplerError::PointOutsideBridge { t } => {
                write!(f, "evaluation time {t} outside the open bridge interval")
            }
            SamplerError::TooFewDraws => write!(f, "need at least 100 draws"),
        }
    }
}

impl core::error::Error for SamplerError {}

/// One draw of the global minimum: its value and the segment that hosts it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinSample {
    pub value: f64,
    pub segment: usize,
}

/// One draw of (minimum, location): the location always lies inside the
/// winning segment and the value below that segment's floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArgminSample {
    pub segment: usize,
    pub min_value: f64,
    pub location: f64,
}

/// Interval hit counts with simultaneous confidence intervals.
#[derive(Debug, Clone)]
pub struct FreqReport {
    /// Hits per inter-knot interval; sums to the number of draws.
    pub counts: Vec<u64>,
    /// Simultaneous confidence level the intervals were built for.
    pub level: f64,
    /// Per-interval `[lo, hi]`, each containing its point estimate.
    pub intervals: Vec<(f64, f64)>,
}

impl FreqReport {
    pub fn draws(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn point_estimates(&self) -> Vec<f64> {
        let n = self.draws() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

/// Exact draw of one segment's minimum by inverse transform.
pub fn simulate_segment_min(seg: &Segment, rng: &mut RngHandle) -> f64 {
    let u = rng.uniform_open01();
    bridge_min_inverse_cdf(seg, u).expect("uniform_open01 stays inside (0, 1)")
}

/// Exact draw of the global minimum: the smallest of the per-segment
/// minima. Cost is linear in the number of segments; ties (a
/// probability-zero event) go to the lowest index.
pub fn simulate_global_min(knots: &Knots, rng: &mut RngHandle) -> MinSample {
    let mut best = MinSample { value: f64::INFINITY, segment: 0 };
    for i in 0..knots.segment_count() {
        let y = simulate_segment_min(&knots.segment(i), rng);
        if y < best.value {
            best = MinSample { value: y, segment: i };
        }
    }
    best
}

/// Tallies which interval hosts the minimum over `draws` runs and wraps the
/// counts in simultaneous confidence intervals (Goodman-style Bonferroni-
/// corrected score intervals; see [`simultaneous_intervals`]).
pub fn freq_report(
    knots: &Knots,
    draws: u64,
    level: f64,
    rng: &mut RngHandle,
) -> Result<FreqReport, SamplerError> {
    if draws < 100 {
        return Err(SamplerError::TooFewDraws);
    }
    let mut counts = vec![0u64; knots.segment_count()];
    for _ in 0..draws {
        counts[simulate_global_min(knots, rng).segment] += 1;
    }
    let intervals = simultaneous_intervals(&counts, level);
    Ok(FreqReport { counts, level, intervals })
}

/// Simultaneous score intervals for multinomial cell probabilities: each
/// cell gets the Wilson interval at the Bonferroni-corrected level
/// `1 - (1 - level)/k`, which gives joint coverage at least `level` across
/// all `k` cells.
pub fn simultaneous_intervals(counts: &[u64], level: f64) -> Vec<(f64, f64)> {
    let k = counts.len().max(1) as f64;
    let n: u64 = counts.iter().sum();
    let n = n as f64;
    let alpha = 1.0 - level;
    let z = math::inv_norm_cdf(1.0 - alpha / (2.0 * k));
    let a = z * z;
    counts
        .iter()
        .map(|&c| {
            let c = c as f64;
            let center = a + 2.0 * c;
            let half = libm::sqrt(a * (a + 4.0 * c * (n - c) / n));
            let denom = 2.0 * (n + a);
            (((center - half) / denom).max(0.0), ((center + half) / denom).min(1.0))
        })
        .collect()
}

/// Exact draw of the minimum's location given its value, by acceptance/
/// rejection: uniform proposals on the segment against the constant
/// envelope `f_max` from [`argmin_cond_mode`]. Returns the accepted
/// location and the number of proposals consumed (the acceptance rate is
/// `1 / (length * f_max)` in expectation).
pub fn simulate_argmin_given_min(
    seg: &Segment,
    y: f64,
    rng: &mut RngHandle,
) -> Result<(f64, u64), SamplerError> {
    let coeffs = argmin_cond_coeffs(seg, y)?;
    let (_, f_max) = argmin_cond_mode(seg, y)?;
    for proposals in 1..=MAX_AR_PROPOSALS {
        let s = rng.uniform_open(seg.t_lo(), seg.t_hi());
        let u = rng.uniform_open01();
        if u * f_max <= coeffs.density(s) {
            return Ok((s, proposals));
        }
    }
    Err(SamplerError::EnvelopeExceeded)
}

/// Exact draw of (global minimum, its location): all segment minima are
/// drawn, the winner selected, and the location sampled from the winning
/// segment's conditional law — conditioned on every segment minimum, the
/// global location and the winner's location have the same law.
pub fn simulate_global_argmin(
    knots: &Knots,
    rng: &mut RngHandle,
) -> Result<ArgminSample, SamplerError> {
    let win = simulate_global_min(knots, rng);
    let seg = knots.segment(win.segment);
    let (location, _) = simulate_argmin_given_min(&seg, win.value, rng)?;
    Ok(ArgminSample { segment: win.segment, min_value: win.value, location })
}

/// Gaussian draw of the bridge value at interior time `t`: mean is the
/// linear interpolation of the endpoints, variance
/// `(t - t_lo)(t_hi - t)/(t_hi - t_lo)`.
pub fn sample_bridge_point(
    seg: &Segment,
    t: f64,
    rng: &mut RngHandle,
) -> Result<f64, SamplerError> {
    if !(t > seg.t_lo() && t < seg.t_hi()) {
        return Err(SamplerError::PointOutsideBridge { t });
    }
    let l = seg.length();
    let frac = (t - seg.t_lo()) / l;
    let mean = seg.x_lo() + frac * (seg.x_hi() - seg.x_lo());
    let var = (t - seg.t_lo()) * (seg.t_hi() - t) / l;
    Ok(rng.normal(mean, libm::sqrt(var)))
}

/// One histogram bin with the kernel density estimate at its center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistBin {
    pub center: f64,
    pub count: u64,
    pub kde: f64,
}

/// Equal-width histogram over the sample range plus a Gaussian kernel
/// density estimate evaluated at the bin centers.
///
/// The default bandwidth is Silverman's rule
/// `0.9 * min(sd, IQR/1.34) * n^(-1/5)` (falling back to whichever of the
/// two scales is positive).
pub fn histogram_and_kde(
    samples: &[f64],
    bins: usize,
    bandwidth: Option<f64>,
) -> Result<Vec<HistBin>, SamplerError> {
    if samples.is_empty() || bins < 2 {
        return Err(SamplerError::BadHistogramRequest);
    }
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Err(SamplerError::DegenerateSample);
    }
    let bw = match bandwidth {
        Some(b) if b > 0.0 => b,
        _ => silverman_bandwidth(samples).ok_or(SamplerError::DegenerateSample)?,
    };

    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &x in samples {
        let idx = (((x - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }

    let n = samples.len() as f64;
    let mut out = Vec::with_capacity(bins);
    for (i, &count) in counts.iter().enumerate() {
        let center = lo + (i as f64 + 0.5) * width;
        let mut acc = 0.0;
        for &x in samples {
            acc += math::norm_pdf((center - x) / bw);
        }
        out.push(HistBin { center, count, kde: acc / (n * bw) });
    }
    Ok(out)
}

/// `0.9 * min(sd, IQR/1.34) * n^(-1/5)`; `None` when both scales vanish.
pub fn silverman_bandwidth(samples: &[f64]) -> Option<f64> {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    let sd = if samples.len() > 1 { libm::sqrt(ss / (n - 1.0)) } else { 0.0 };

    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);

    let mut scale = f64::INFINITY;
    if sd > 0.0 {
        scale = scale.min(sd);
    }
    if iqr > 0.0 {
        scale = scale.min(iqr / 1.34);
    }
    if !scale.is_finite() {
        return None;
    }
    Some(0.9 * scale * libm::pow(n, -0.2))
}

/// Linear-interpolation quantile of an already-sorted slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = p * (n - 1) as f64;
    let i = pos as usize;
    let frac = pos - i as f64;
    if i + 1 < n { sorted[i] + frac * (sorted[i + 1] - sorted[i]) } else { sorted[n - 1] }
}
