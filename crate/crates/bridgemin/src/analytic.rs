//! Closed-form laws of bridge minima and their locations.
//!
//! Conventions shared by every density here: support indicators are baked in
//! (points outside the support evaluate to 0, never an error), so quadrature
//! integrands need no special-casing. NaN inputs propagate to NaN.

use core::f64::consts::PI;
use core::fmt;

use crate::math;
use crate::model::{Knots, Segment};

/// Argument outside an operation's mathematical domain.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticError {
    /// The conditioning level `y` must lie strictly below both endpoint
    /// values of the segment.
    LevelNotBelowFloor { y: f64, floor: f64 },
    /// A probability argument must lie in the open interval (0, 1).
    QuantileOutOfRange { z: f64 },
}

impl fmt::Display for AnalyticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticError::LevelNotBelowFloor { y, floor } => {
                write!(f, "level y={y} must be strictly below the segment floor {floor}")
            }
            AnalyticError::QuantileOutOfRange { z } => {
                write!(f, "quantile argument {z} outside (0, 1)")
            }
        }
    }
}

impl core::error::Error for AnalyticError {}

/// Density of the minimum of a Brownian motion started at `(0, start)` and
/// run for `horizon` time units: `sqrt(2/(pi*horizon)) *
/// exp(-(start-y)^2 / (2*horizon))` for `y < start`, else 0.
///
/// The `1/sqrt(horizon)` prefactor is the unique normalization with unit
/// mass; it also matches the folded-normal form of the reflection principle.
pub fn bm_min_density(start: f64, horizon: f64, y: f64) -> f64 {
    if y.is_nan() {
        return f64::NAN;
    }
    debug_assert!(horizon > 0.0);
    // Left-continuous at the support edge: the boundary value is the limit.
    if y > start {
        return 0.0;
    }
    let z = start - y;
    libm::sqrt(2.0 / (PI * horizon)) * libm::exp(-z * z / (2.0 * horizon))
}

/// Density of the minimum of the bridge `seg`:
/// `(2/l) * (x_lo + x_hi - 2y) * exp(-2 (x_lo - y)(x_hi - y) / l)` below the
/// floor, 0 elsewhere.
pub fn bridge_min_density(seg: &Segment, y: f64) -> f64 {
    if y.is_nan() {
        return f64::NAN;
    }
    if y > seg.floor() {
        return 0.0;
    }
    let l = seg.length();
    let u = seg.x_lo() - y;
    let v = seg.x_hi() - y;
    (2.0 / l) * (u + v) * libm::exp(-2.0 * u * v / l)
}

/// Distribution function of the bridge minimum:
/// `exp(-2 (x_lo - y)(x_hi - y) / l)` below the floor, 1 at or above it
/// (the minimum sits below both endpoints almost surely).
pub fn bridge_min_cdf(seg: &Segment, y: f64) -> f64 {
    if y.is_nan() {
        return f64::NAN;
    }
    if y >= seg.floor() {
        return 1.0;
    }
    let u = seg.x_lo() - y;
    let v = seg.x_hi() - y;
    libm::exp(-2.0 * u * v / seg.length())
}

/// Explicit inverse of [`bridge_min_cdf`] on `z` in (0, 1):
/// `(x_lo + x_hi - sqrt((x_hi - x_lo)^2 - 2 l ln z)) / 2`.
pub fn bridge_min_inverse_cdf(seg: &Segment, z: f64) -> Result<f64, AnalyticError> {
    if !(z > 0.0 && z < 1.0) {
        return Err(AnalyticError::QuantileOutOfRange { z });
    }
    let d = seg.gap();
    let disc = d * d - 2.0 * seg.length() * libm::log(z);
    Ok(0.5 * (seg.x_lo() + seg.x_hi() - libm::sqrt(disc)))
}

/// Survival function `P{min of the whole process > y}`: the product over
/// segments of `1 - exp(-2 (x_i - y)(x_{i+1} - y) / (t_{i+1} - t_i))` below
/// `min_i x_i`, and 0 at or above it.
pub fn global_min_survival(knots: &Knots, y: f64) -> f64 {
    if y.is_nan() {
        return f64::NAN;
    }
    if y >= knots.min_value() {
        return 0.0;
    }
    let times = knots.times();
    let values = knots.values();
    let mut prod = 1.0;
    for i in 0..knots.segment_count() {
        let l = times[i + 1] - times[i];
        let u = values[i] - y;
        let v = values[i + 1] - y;
        prod *= 1.0 - libm::exp(-2.0 * u * v / l);
    }
    prod
}

/// Probability that the minimum of the bridge `(0,0) -> (0.5,0)` undercuts
/// the minimum of `(0.5,0) -> (1,d2)`, as an explicit function of the second
/// gap: `1/2 + sqrt(pi/8) * d2 * exp(d2^2/2) * erfc(d2/sqrt(2))`.
///
/// Evaluated through the scaled complementary error function so the
/// `exp * erfc` product neither overflows nor loses the tail. Requires
/// `d2 >= 0`; returns NaN otherwise.
pub fn pairwise_prob_closed_d2(d2: f64) -> f64 {
    if !(d2 >= 0.0) {
        return f64::NAN;
    }
    0.5 + libm::sqrt(PI / 8.0) * d2 * math::erfcx(d2 * core::f64::consts::FRAC_1_SQRT_2)
}

/// Probability that the minimum of the bridge `(0,0) -> (0.5,0)` undercuts
/// the minimum of a zero-gap bridge of length `l2`: `1 / (2 l2 + 1)`.
/// Requires `l2 > 0`; returns NaN otherwise.
pub fn pairwise_prob_closed_l2(l2: f64) -> f64 {
    if !(l2 > 0.0) {
        return f64::NAN;
    }
    1.0 / (2.0 * l2 + 1.0)
}

/// Density of the location of the bridge minimum on `[t_lo, t_hi]`:
///
/// ```text
/// d/l^(3/2) * sqrt(2/(pi h)) * exp(-d^2 h / (2 l))
///   + (l - d^2)/l^2 * erfc(sqrt(d^2 h / (2 l)))
/// ```
///
/// with `h(s) = (t_hi - s)/(s - t_lo)` when `x_hi <= x_lo` and its
/// reciprocal otherwise. For `d = 0` the first term vanishes and `erfc(0) =
/// 1` leaves exactly the uniform density `1/l`. The density is unbounded at
/// the lower-valued endpoint (integrable inverse-square-root singularity).
pub fn argmin_density(seg: &Segment, s: f64) -> f64 {
    if s.is_nan() {
        return f64::NAN;
    }
    if s < seg.t_lo() || s > seg.t_hi() {
        return 0.0;
    }
    let l = seg.length();
    let d = seg.gap();
    let p = s - seg.t_lo();
    let q = seg.t_hi() - s;
    let h = if seg.x_hi() <= seg.x_lo() { q / p } else { p / q };
    let arg = d * d * h / (2.0 * l);
    // The d = 0 endpoint would otherwise evaluate 0 * inf.
    let term1 = if d > 0.0 {
        d / (l * libm::sqrt(l)) * libm::sqrt(2.0 / (PI * h)) * libm::exp(-arg)
    } else {
        0.0
    };
    let term2 = (l - d * d) / (l * l) * libm::erfc(libm::sqrt(arg));
    term1 + term2
}

/// Joint density of (minimum value, minimum location) of the bridge `seg`:
///
/// ```text
/// (x_lo - y)(x_hi - y) sqrt(2 l) / sqrt(pi (s - t_lo)^3 (t_hi - s)^3)
///   * exp(d^2/(2l) - (x_lo - y)^2/(2(s - t_lo)) - (x_hi - y)^2/(2(t_hi - s)))
/// ```
///
/// on `{y < x_lo, y < x_hi, t_lo < s < t_hi}`, 0 elsewhere (including the
/// `s` endpoints, where 0 is the limit value).
pub fn joint_min_argmin_density(seg: &Segment, y: f64, s: f64) -> f64 {
    if y.is_nan() || s.is_nan() {
        return f64::NAN;
    }
    if y >= seg.x_lo() || y >= seg.x_hi() || s <= seg.t_lo() || s >= seg.t_hi() {
        return 0.0;
    }
    let l = seg.length();
    let d = seg.gap();
    let u = seg.x_lo() - y;
    let v = seg.x_hi() - y;
    let p = s - seg.t_lo();
    let q = seg.t_hi() - s;
    let expo = d * d / (2.0 * l) - u * u / (2.0 * p) - v * v / (2.0 * q);
    // expo <= -2uv/l < 0; once exp underflows the prefactor is irrelevant
    // (and may itself overflow for tiny p or q).
    if expo < -745.0 {
        return 0.0;
    }
    u * v * libm::sqrt(2.0 * l) / libm::sqrt(PI * p * p * p * q * q * q) * libm::exp(expo)
}

/// The `y`-dependent constants of the conditional location density
/// [`argmin_cond_density`]: `A = (x_lo - y)^2`, `B = (x_hi - y)^2`, and the
/// normalizing factor `C`.
///
/// `C` grows like `exp((x_lo + x_hi - 2y)^2 / (2 l))` and can overflow f64
/// for deeply negative `y`, so evaluation goes through `log_c`; the `c`
/// field is the plain value where representable.
#[derive(Debug, Clone, Copy)]
pub struct ArgminCondCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    log_c: f64,
    t_lo: f64,
    t_hi: f64,
}

impl ArgminCondCoeffs {
    /// Conditional density of the location at `s`, given the minimum equals
    /// the level these coefficients were built for:
    /// `C (s-t_lo)^{-3/2} (t_hi-s)^{-3/2} exp(-A/(2(s-t_lo)) - B/(2(t_hi-s)))`
    /// on `[t_lo, t_hi]`, 0 outside and at the endpoints (limit value).
    pub fn density(&self, s: f64) -> f64 {
        if s.is_nan() {
            return f64::NAN;
        }
        if s <= self.t_lo || s >= self.t_hi {
            return 0.0;
        }
        let p = s - self.t_lo;
        let q = self.t_hi - s;
        // log C already contains +(u+v)^2/(2l); the spread term below is
        // <= -(u+v)^2/(2l), so the sum never overflows.
        let log_f =
            self.log_c - 1.5 * (libm::log(p) + libm::log(q)) - self.a / (2.0 * p) - self.b / (2.0 * q);
        libm::exp(log_f)
    }

    pub fn t_lo(&self) -> f64 {
        self.t_lo
    }

    pub fn t_hi(&self) -> f64 {
        self.t_hi
    }
}

/// Coefficients of the conditional location density given minimum level `y`.
///
/// `A(y) = (x_lo - y)^2`, `B(y) = (x_hi - y)^2`,
/// `C(y) = l^{3/2} (x_lo - y)(x_hi - y) / (sqrt(2 pi) (x_lo + x_hi - 2y))
///         * exp((x_lo + x_hi - 2y)^2 / (2 l))`.
pub fn argmin_cond_coeffs(seg: &Segment, y: f64) -> Result<ArgminCondCoeffs, AnalyticError> {
    if !(y < seg.floor()) {
        return Err(AnalyticError::LevelNotBelowFloor { y, floor: seg.floor() });
    }
    let l = seg.length();
    let u = seg.x_lo() - y;
    let v = seg.x_hi() - y;
    let log_c = 1.5 * libm::log(l) + libm::log(u) + libm::log(v) - libm::log(u + v)
        - 0.5 * libm::log(2.0 * PI)
        + (u + v) * (u + v) / (2.0 * l);
    Ok(ArgminCondCoeffs {
        a: u * u,
        b: v * v,
        c: libm::exp(log_c),
        log_c,
        t_lo: seg.t_lo(),
        t_hi: seg.t_hi(),
    })
}

/// Conditional density of the minimum's location given the minimum value:
/// `joint_min_argmin_density(y, s) / bridge_min_density(y)` pointwise.
pub fn argmin_cond_density(seg: &Segment, y: f64, s: f64) -> Result<f64, AnalyticError> {
    Ok(argmin_cond_coeffs(seg, y)?.density(s))
}

/// Global maximizer and maximum of the conditional location density over
/// `[t_lo, t_hi]`.
///
/// Interior critical points satisfy, with `p = s - t_lo` and `q = t_hi - s`,
/// the cubic `3(p^2 q - p q^2) + A q^2 - B p^2 = 0` (the normalizing factor
/// `C` multiplies the whole derivative and drops out of the root equation).
/// Since the polynomial is `A l^2 > 0` at `p = 0` and `-B l^2 < 0` at
/// `p = l`, an interior critical point always exists; the density vanishes
/// at both endpoints, so the returned point dominates the whole interval.
/// All real roots in `(0, l)` are polished by bisection-safeguarded Newton
/// to 1e-12 in `s` and the density is maximized over the candidates.
pub fn argmin_cond_mode(seg: &Segment, y: f64) -> Result<(f64, f64), AnalyticError> {
    let coeffs = argmin_cond_coeffs(seg, y)?;
    let l = seg.length();
    let (a, b) = (coeffs.a, coeffs.b);

    // 3(p^2 q - p q^2) + A q^2 - B p^2 with q = l - p, expanded in p.
    let c3 = -6.0;
    let c2 = 9.0 * l + a - b;
    let c1 = -3.0 * l * l - 2.0 * a * l;
    let c0 = a * l * l;

    let poly = |p: f64| ((c3 * p + c2) * p + c1) * p + c0;
    let dpoly = |p: f64| (3.0 * c3 * p + 2.0 * c2) * p + c1;

    let mut roots = [f64::NAN; 3];
    let mut count = 0;
    for r in cubic_real_roots(c3, c2, c1, c0) {
        roots[count] = r;
        count += 1;
    }
    roots[..count].sort_unstable_by(f64::total_cmp);

    let mut candidates = [f64::NAN; 4];
    let mut n_cand = 0;
    for i in 0..count {
        let r = roots[i];
        if !(r > 0.0 && r < l) {
            continue;
        }
        // Local bracket: halfway to the neighboring roots (or the interval
        // ends), so each root is polished against its own sign change.
        let lo = if i > 0 { (0.5 * (roots[i - 1] + r)).max(0.0) } else { 0.0 };
        let hi = if i + 1 < count { (0.5 * (r + roots[i + 1])).min(l) } else { l };
        candidates[n_cand] = polish_root(&poly, &dpoly, r, lo, hi);
        n_cand += 1;
    }
    // poly(0) = A l^2 > 0 > -B l^2 = poly(l) guarantees a bracketed root even
    // if the closed form degenerates numerically.
    if n_cand == 0 {
        candidates[0] = polish_root(&poly, &dpoly, 0.5 * l, 0.0, l);
        n_cand = 1;
    }

    let mut best: Option<(f64, f64)> = None;
    for &p in &candidates[..n_cand] {
        if p > 0.0 && p < l {
            let s = seg.t_lo() + p;
            let f = coeffs.density(s);
            if best.is_none_or(|(_, fb)| f > fb) {
                best = Some((s, f));
            }
        }
    }
    Ok(best.expect("sign change on (0, l) guarantees a critical point"))
}

/// Location density of the minimum of the `(0,0) -> (1,1)` bridge:
/// `sqrt(2(1-s)/(pi s)) * exp(-s/(2(1-s)))` on (0, 1), 0 outside.
///
/// This is [`argmin_density`] specialized to that segment (`l = d = 1`
/// kills the erfc term); mass piles up near 0, the density vanishes at 1.
pub fn eqp_location_density(s: f64) -> f64 {
    if s.is_nan() {
        return f64::NAN;
    }
    if s <= 0.0 || s >= 1.0 {
        return 0.0;
    }
    libm::sqrt(2.0 * (1.0 - s) / (PI * s)) * libm::exp(-s / (2.0 * (1.0 - s)))
}

/// Real roots of `c3 x^3 + c2 x^2 + c1 x + c0` (c3 != 0), one or three, via
/// the trigonometric/Cardano closed forms on the depressed cubic.
fn cubic_real_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> impl Iterator<Item = f64> {
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;
    // x = t - a/3 removes the quadratic term: t^3 + pt + q.
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;

    let mut roots = [f64::NAN; 3];
    let count;
    let disc = q * q / 4.0 + p * p * p / 27.0;
    if disc > 0.0 {
        // One real root (Cardano).
        let sq = libm::sqrt(disc);
        let t = libm::cbrt(-q / 2.0 + sq) + libm::cbrt(-q / 2.0 - sq);
        roots[0] = t - shift;
        count = 1;
    } else if p == 0.0 {
        // Triple root.
        roots[0] = -shift;
        count = 1;
    } else {
        // Three real roots (Viete's trigonometric form).
        let m = 2.0 * libm::sqrt(-p / 3.0);
        let cos_arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = libm::acos(cos_arg) / 3.0;
        for (k, slot) in roots.iter_mut().enumerate() {
            let angle = theta - 2.0 * PI * k as f64 / 3.0;
            *slot = m * libm::cos(angle) - shift;
        }
        count = 3;
    }
    roots.into_iter().take(count)
}

/// Newton polishing of a root of `f` near `x0`, to 1e-13 absolute.
///
/// When `[lo, hi]` brackets a sign change the bracket shrinks each
/// iteration and any Newton step that escapes it is replaced by bisection;
/// otherwise (even-multiplicity root, degenerate bracket) plain clamped
/// Newton runs.
fn polish_root(f: &impl Fn(f64) -> f64, df: &impl Fn(f64) -> f64, x0: f64, lo: f64, hi: f64) -> f64 {
    let mut lo = lo;
    let mut hi = hi;
    let mut f_lo = f(lo);
    let bracketed = (f_lo > 0.0) != (f(hi) > 0.0);
    let mut x = x0.clamp(lo, hi);
    for _ in 0..100 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if bracketed {
            if (fx > 0.0) == (f_lo > 0.0) {
                lo = x;
                f_lo = fx;
            } else {
                hi = x;
            }
        }
        let d = df(x);
        let mut next = if d != 0.0 { x - fx / d } else { f64::NAN };
        if !next.is_finite() || next < lo || next > hi {
            if !bracketed {
                return x;
            }
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() < 1e-13 {
            return next;
        }
        x = next;
        if bracketed && hi - lo < 1e-13 {
            return 0.5 * (lo + hi);
        }
    }
    x
}
