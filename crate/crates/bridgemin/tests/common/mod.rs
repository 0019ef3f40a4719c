//! Independent oracles for the integration suites: an adaptive Simpson
//! integrator (deliberately not the crate's Gauss-Kronrod path),
//! Kolmogorov-Smirnov statistics, and chi-square critical values.

#![allow(dead_code)]

/// Adaptive Simpson quadrature with Richardson correction.
pub fn simpson_adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn basic(h: f64, fa: f64, fm: f64, fb: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = basic(m - a, fa, flm, fm);
        let right = basic(b - m, fm, frm, fb);
        let delta = left + right - whole;
        // The first levels are forced: sparse probes on a concentrated
        // integrand would otherwise all read zero and accept instantly.
        let forced = depth > 42;
        if !forced && (depth == 0 || delta.abs() <= 15.0 * tol) {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = basic(b - a, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// One-sample Kolmogorov-Smirnov distance of sorted samples against a CDF.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let fx = cdf(x);
        d = d.max((fx - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - fx).abs());
    }
    d
}

/// Asymptotic two-sample Kolmogorov-Smirnov p-value.
pub fn two_sample_ks_p(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let mut d: f64 = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let lambda = d * (n * m / (n + m)).sqrt();
    let mut p = 0.0;
    for k in 1..=100 {
        let term = 2.0 * (-2.0 * (k as f64) * (k as f64) * lambda * lambda).exp();
        p += if k % 2 == 1 { term } else { -term };
    }
    p.clamp(0.0, 1.0)
}

/// Standard normal CDF via the complementary error function.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Standard normal quantile by bisection on [`norm_cdf`].
pub fn inv_norm(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    let (mut lo, mut hi) = (-40.0, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if norm_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Chi-square quantile by the Wilson-Hilferty cube approximation (good to a
/// fraction of a percent for the degrees of freedom used here).
pub fn chi2_quantile(df: f64, p: f64) -> f64 {
    let z = inv_norm(p);
    let t = 1.0 - 2.0 / (9.0 * df) + z * (2.0 / (9.0 * df)).sqrt();
    df * t * t * t
}

/// Pearson chi-square statistic of observed counts against expected
/// probabilities (scaled to the sample size).
pub fn chi2_statistic(counts: &[u64], probs: &[f64]) -> f64 {
    let n: u64 = counts.iter().sum();
    counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let e = p * n as f64;
            let d = c as f64 - e;
            d * d / e
        })
        .sum()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn sample_sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

#[test]
fn oracle_self_checks() {
    // Simpson against closed forms.
    let v = simpson_adaptive(&|x: f64| x * x, 0.0, 3.0, 1e-12);
    assert!((v - 9.0).abs() < 1e-10);
    let v = simpson_adaptive(&|x: f64| (-x).exp(), 0.0, 30.0, 1e-12);
    assert!((v - 1.0).abs() < 1e-9);
    // Normal quantile bisection.
    assert!((inv_norm(0.975) - 1.959964).abs() < 1e-5);
    // Known chi-square critical value (df = 49, p = 0.999 is 85.351).
    let q = chi2_quantile(49.0, 0.999);
    assert!((q - 85.351).abs() < 0.3, "q={q}");
}
