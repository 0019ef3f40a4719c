//! Acceptance suite: one test per shipping criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them).
//!
//! Stochastic criteria run with pinned seeds at the tolerances stated in
//! each test; `BRIDGEMIN_FULL_BENCH=1` upgrades the benchmark reproduction
//! to the full 1000-replicate scale (minutes instead of seconds).

mod common;

use bridgemin::analytic::*;
use bridgemin::bench::*;
use bridgemin::quadrature::*;
use bridgemin::sampler::*;
use bridgemin::{Knots, PairwiseConfig, RngHandle, Segment};
use common::{chi2_quantile, chi2_statistic, ks_statistic, simpson_adaptive};

fn knots(rows: &[(f64, f64)]) -> Knots {
    Knots::from_rows(rows).unwrap()
}

fn set1() -> Knots {
    knots(&[(0.0, 0.0), (0.1, 0.0), (0.2, 0.0), (0.5, 0.0), (1.0, 0.0)])
}

fn set2() -> Knots {
    knots(&[(0.0, 0.0), (0.1, 0.1), (0.2, 0.2), (0.5, 0.3), (1.0, 0.4)])
}

fn sixteen_times() -> [f64; 17] {
    [
        0.0, 0.025, 0.050, 0.075, 0.100, 0.125, 0.150, 0.175, 0.200, 0.275, 0.350, 0.425, 0.500,
        0.625, 0.750, 0.875, 1.0,
    ]
}

fn set3() -> Knots {
    knots(&sixteen_times().map(|t| (t, 0.0)))
}

fn set4() -> Knots {
    let rows: Vec<(f64, f64)> = sixteen_times()
        .iter()
        .enumerate()
        .map(|(i, &t)| (t, i as f64 / 40.0))
        .collect();
    knots(&rows)
}

fn full_bench() -> bool {
    std::env::var("BRIDGEMIN_FULL_BENCH").is_ok_and(|v| v == "1")
}

fn bench_replicates() -> usize {
    if full_bench() { 1000 } else { 300 }
}

#[test]
fn criterion_01_table1_golden_values() {
    // Published first-interval probabilities. The 16-interval flat set's
    // published value is irreproducible from its printed knots (all four
    // methods and an exponential-race oracle agree on another value, and the
    // published per-method error columns match that value's integrand); it
    // is pinned to the oracle-confirmed value here and the published number
    // is kept, red, in `criterion_01_sixteen_interval_flat_set_as_printed`.
    let cases = [
        ("set1", set1(), 0.05722062072176488, true),
        ("set2", set2(), 0.3539550244743264, true),
        ("set3", set3(), 0.003053658531871728, false),
        ("set4", set4(), 0.3498434691309963, true),
    ];
    let oracle_set3 = 0.0018495216439505;
    let cfg = QuadConfig::default();
    for (name, k, printed, reproducible) in cases {
        let start = std::time::Instant::now();
        let r = interval_prob(&k, 0, &cfg, None).unwrap();
        let elapsed = start.elapsed();
        assert!(r.converged);
        assert!(elapsed.as_secs_f64() <= 1.0, "{name}: took {elapsed:?}");
        if reproducible {
            assert!(
                (r.value - printed).abs() <= 1e-8,
                "{name}: {} vs {printed}",
                r.value
            );
            println!(
                "criterion 1 [{name}]: PASS (|err|={:.2e} <= 1e-8, {elapsed:?})",
                (r.value - printed).abs()
            );
        } else {
            assert!(
                (r.value - oracle_set3).abs() <= 1e-8,
                "{name}: {} vs oracle {oracle_set3}",
                r.value
            );
            println!(
                "criterion 1 [{name}]: FAIL against printed {printed} (got {}, all methods + \
                 independent oracle agree; see decisions ledger) — PASS against oracle value",
                r.value
            );
        }
    }
}

/// The published value for the 16-interval flat set, asserted verbatim.
/// Red by construction: the printed inputs provably do not produce it.
/// Run with `cargo test -- --ignored` to see the discrepancy.
#[test]
#[ignore = "published value irreproducible from the printed knots; see decisions ledger"]
fn criterion_01_sixteen_interval_flat_set_as_printed() {
    let r = interval_prob(&set3(), 0, &QuadConfig::default(), None).unwrap();
    assert!(
        (r.value - 0.003053658531871728).abs() <= 1e-8,
        "published 0.003053658531871728, computed {}",
        r.value
    );
}

#[test]
fn criterion_02_ordering_counterexamples() {
    let cfg = QuadConfig::default();
    let k = knots(&[(0.0, 0.0), (0.144, 0.225), (0.610, 0.344), (1.0, 0.145)]);
    let probs = interval_probs(&k, &cfg, None).unwrap();
    for (r, want) in probs.iter().zip([0.3124, 0.3374, 0.3502]) {
        assert!((r.value - want).abs() < 5e-5, "{} vs {want}", r.value);
    }
    let segs = k.segments();
    let pair = |i: usize, j: usize| {
        pairwise_prob(&PairwiseConfig::new(segs[i], segs[j]), &cfg, None).unwrap().value
    };
    assert!((pair(0, 1) - 0.5436).abs() < 5e-5);
    assert!((pair(0, 2) - 0.5198).abs() < 5e-5);

    let k = knots(&[(0.0, 0.0), (0.392, 0.031), (0.594, -0.157), (1.0, 0.435)]);
    let segs = k.segments();
    let pair = |i: usize, j: usize| {
        pairwise_prob(&PairwiseConfig::new(segs[i], segs[j]), &cfg, None).unwrap().value
    };
    for ((i, j), want) in [((0, 1), 0.5018), ((1, 2), 0.5032), ((2, 0), 0.5013)] {
        assert!((pair(i, j) - want).abs() < 5e-5, "({i},{j})");
    }
    println!("criterion 2: PASS (interval probs 0.3124/0.3374/0.3502, pairwise 0.5436/0.5198, circular 0.5018/0.5032/0.5013, all to 4 decimals)");
}

#[test]
fn criterion_03_closed_form_table() {
    let table = [
        (0.0, 0.5),
        (0.1837, 0.6),
        (0.4386, 0.7),
        (0.8384, 0.8),
        (1.6620, 0.9),
        (2.7302, 0.95),
        (6.8638, 0.99),
    ];
    for (d2, want) in table {
        let p = pairwise_prob_closed_d2(d2);
        assert!((p - want).abs() < 5e-5, "d2={d2}: {p} vs {want}");
    }
    let cfg = QuadConfig::default();
    for i in 0..=7 {
        let d2 = i as f64;
        let closed = pairwise_prob_closed_d2(d2);
        let pw = PairwiseConfig::from_params(0.5, 0.0, 0.5, d2, 0.0).unwrap();
        let quad = pairwise_prob(&pw, &cfg, None).unwrap().value;
        assert!((closed - quad).abs() < 1e-7, "d2={d2}: {closed} vs {quad}");
    }
    println!("criterion 3: PASS (seven table rows within 5e-5; quadrature agrees within 1e-7 on the d2 grid)");
}

#[test]
fn criterion_04_normalization_suite() {
    fn random_seg(rng: &mut RngHandle, max_gap: f64) -> Segment {
        let t_lo = rng.uniform_open(0.0, 0.5);
        let t_hi = t_lo + rng.uniform_open(0.05, 0.5);
        let x_lo = rng.uniform_open(-max_gap, max_gap);
        let x_hi = rng.uniform_open(-max_gap, max_gap);
        Segment::new(t_lo, t_hi, x_lo, x_hi).unwrap()
    }
    let mut rng = RngHandle::new(20260808);

    // Brownian-motion minimum density.
    for _ in 0..20 {
        let s = random_seg(&mut rng, 0.8);
        let (start, horizon) = (s.x_lo(), s.length());
        let mass = simpson_adaptive(
            &|y| bm_min_density(start, horizon, y),
            start - 12.0 * horizon.sqrt(),
            start,
            1e-9,
        );
        assert!((mass - 1.0).abs() < 1e-6, "bm: {mass}");
    }
    // Bridge minimum density.
    for _ in 0..20 {
        let s = random_seg(&mut rng, 0.8);
        let mass = simpson_adaptive(
            &|y| bridge_min_density(&s, y),
            s.floor() - 2.0 - 8.0 * s.length().sqrt(),
            s.floor(),
            1e-9,
        );
        assert!((mass - 1.0).abs() < 1e-6, "bridge: {mass}");
    }
    // Joint density of (minimum, location), integrated location-first. The
    // level axis stops a strip short of the floor: just below it the
    // location slice is a spike of width (floor - y)^2, unresolvable in
    // floating point; the strip's mass is the exact minimum-CDF complement.
    for _ in 0..20 {
        let s = random_seg(&mut rng, 0.6);
        let slice = |y: f64| {
            simpson_adaptive(&|loc| joint_min_argmin_density(&s, y, loc), s.t_lo(), s.t_hi(), 1e-10)
        };
        let edge = s.floor() - 1e-3;
        let strip = 1.0 - bridge_min_cdf(&s, edge);
        let mass = simpson_adaptive(&slice, s.floor() - 6.0, edge, 1e-8) + strip;
        assert!((mass - 1.0).abs() < 1e-6, "joint: {mass}");
    }
    // Location density, singular endpoint substituted away; the first
    // stretch of the substituted integrand is its (finite) endpoint limit
    // to within O(u^2), so it is added in closed form rather than sampled
    // where the endpoint distance quantizes.
    for _ in 0..20 {
        let s = random_seg(&mut rng, 0.8);
        let (a, b) = (s.t_lo(), s.t_hi());
        let singular_lo = s.x_lo() <= s.x_hi();
        let limit =
            2.0 * std::f64::consts::SQRT_2 * s.gap() / (s.length() * std::f64::consts::PI.sqrt());
        let f = |u: f64| {
            let at = if singular_lo { a + u * u } else { b - u * u };
            2.0 * u * argmin_density(&s, at)
        };
        let u_min = 1e-5;
        let mass = limit * u_min + simpson_adaptive(&f, u_min, (b - a).sqrt(), 1e-9);
        assert!((mass - 1.0).abs() < 1e-6, "argmin: {mass}");
    }
    // Conditional location density given the minimum.
    for _ in 0..20 {
        let s = random_seg(&mut rng, 0.6);
        let y = s.floor() - rng.uniform_open(0.02, 1.0);
        let coeffs = argmin_cond_coeffs(&s, y).unwrap();
        let mass = simpson_adaptive(&|loc| coeffs.density(loc), s.t_lo(), s.t_hi(), 1e-9);
        assert!((mass - 1.0).abs() < 1e-6, "cond: {mass}");
    }
    // Reduced location density of the unit-slope bridge.
    let mass = simpson_adaptive(&|u: f64| 2.0 * u * eqp_location_density(u * u), 0.0, 1.0, 1e-9);
    assert!((mass - 1.0).abs() < 1e-6);

    // Marginalization and factorization identities.
    for _ in 0..20 {
        let s = random_seg(&mut rng, 0.6);
        let y = s.floor() - rng.uniform_open(0.05, 0.8);
        let marg = simpson_adaptive(
            &|loc| joint_min_argmin_density(&s, y, loc),
            s.t_lo(),
            s.t_hi(),
            1e-10,
        );
        assert!((marg - bridge_min_density(&s, y)).abs() < 1e-6);

        let loc = rng.uniform_open(s.t_lo(), s.t_hi());
        let marg2 = simpson_adaptive(
            &|yy| joint_min_argmin_density(&s, yy, loc),
            s.floor() - 7.0,
            s.floor(),
            1e-9,
        );
        assert!((marg2 - argmin_density(&s, loc)).abs() < 1e-6);

        let joint = joint_min_argmin_density(&s, y, loc);
        let product = argmin_cond_density(&s, y, loc).unwrap() * bridge_min_density(&s, y);
        assert!((joint - product).abs() <= 1e-6 * joint.max(1.0));
    }
    println!("criterion 4: PASS (normalization, marginalization, and factorization within 1e-6 over 20 randomized draws each)");
}

#[test]
fn criterion_05_sampler_exactness() {
    // KS of one million inverse-CDF minimum draws.
    let s = Segment::new(0.0, 0.5, 0.1, -0.2).unwrap();
    let mut rng = RngHandle::new(31337);
    let n = 1_000_000;
    let mut draws: Vec<f64> = (0..n).map(|_| simulate_segment_min(&s, &mut rng)).collect();
    draws.sort_unstable_by(f64::total_cmp);
    let d = ks_statistic(&draws, |y| bridge_min_cdf(&s, y));
    assert!(d < 0.002, "KS={d}");

    // Chi-square goodness of fit of acceptance/rejection locations on 50
    // bins, ten random cases, p > 0.001.
    let mut param_rng = RngHandle::new(424242);
    for case in 0..10u64 {
        let t_lo = param_rng.uniform_open(0.0, 0.4);
        let t_hi = t_lo + param_rng.uniform_open(0.1, 0.6);
        let x_lo = param_rng.uniform_open(-0.4, 0.4);
        let x_hi = param_rng.uniform_open(-0.4, 0.4);
        let seg = Segment::new(t_lo, t_hi, x_lo, x_hi).unwrap();
        let y = seg.floor() - param_rng.uniform_open(0.05, 0.8);
        let coeffs = argmin_cond_coeffs(&seg, y).unwrap();

        let bins = 50usize;
        let width = seg.length() / bins as f64;
        let probs: Vec<f64> = (0..bins)
            .map(|b| {
                let a = seg.t_lo() + b as f64 * width;
                simpson_adaptive(&|loc| coeffs.density(loc), a, a + width, 1e-11)
            })
            .collect();
        let mut rng = RngHandle::substream(987, case);
        let mut counts = vec![0u64; bins];
        for _ in 0..100_000 {
            let (loc, _) = simulate_argmin_given_min(&seg, y, &mut rng).unwrap();
            counts[(((loc - seg.t_lo()) / width) as usize).min(bins - 1)] += 1;
        }
        let stat = chi2_statistic(&counts, &probs);
        let crit = chi2_quantile((bins - 1) as f64, 0.999);
        assert!(stat < crit, "case {case}: chi2={stat} >= {crit}");
    }

    // Envelope validity on 50 random cases against 10^4-point grids.
    let mut param_rng = RngHandle::new(515151);
    for case in 0..50 {
        let t_lo = param_rng.uniform_open(0.0, 0.5);
        let t_hi = t_lo + param_rng.uniform_open(0.05, 0.5);
        let x_lo = param_rng.uniform_open(-0.8, 0.8);
        let x_hi = param_rng.uniform_open(-0.8, 0.8);
        let seg = Segment::new(t_lo, t_hi, x_lo, x_hi).unwrap();
        let y = seg.floor() - param_rng.uniform_open(0.01, 1.2);
        let (_, f_max) = argmin_cond_mode(&seg, y).unwrap();
        let coeffs = argmin_cond_coeffs(&seg, y).unwrap();
        for i in 1..10_000 {
            let loc = t_lo + (t_hi - t_lo) * i as f64 / 10_000.0;
            assert!(
                f_max >= coeffs.density(loc) - 1e-9 * f_max,
                "case {case}: envelope breached at {loc}"
            );
        }
    }
    println!("criterion 5: PASS (KS {d:.5} < 0.002 at 1e6 draws; 10/10 GOF cases p > 0.001; 50/50 envelopes dominate their grids)");
}

#[test]
fn criterion_06_frequency_table() {
    // The published frequency table is attributed to the flat knot set, but
    // its rows match the rising-value set (whose quadrature values all sit
    // inside the printed intervals, first row included); the flat set's
    // first interval has probability 0.0572, far outside [0.3501, 0.3715].
    // See the decisions ledger. Checked here with the rising-value set:
    // each interval's frequency must land inside its printed interval in at
    // least 17 of 20 seeded runs.
    let printed = [(0.3501, 0.3715), (0.0955, 0.1169), (0.2362, 0.2576), (0.2758, 0.2972)];
    let k = set2();
    let quad = interval_probs(&k, &QuadConfig::default(), None).unwrap();
    for (r, &(lo, hi)) in quad.iter().zip(&printed) {
        assert!(
            r.value >= lo && r.value <= hi,
            "quadrature value {} outside printed interval [{lo}, {hi}]",
            r.value
        );
    }

    let mut per_interval = [0u32; 4];
    let mut all_four = 0u32;
    for run in 0..20 {
        let mut rng = RngHandle::substream(7002, run);
        let rep = freq_report(&k, 10_000, 0.95, &mut rng).unwrap();
        let est = rep.point_estimates();
        let mut ok = true;
        for (i, (&e, &(lo, hi))) in est.iter().zip(&printed).enumerate() {
            if e >= lo && e <= hi {
                per_interval[i] += 1;
            } else {
                ok = false;
            }
        }
        if ok {
            all_four += 1;
        }
    }
    for (i, &count) in per_interval.iter().enumerate() {
        assert!(count >= 17, "interval {i}: inside in only {count}/20 runs");
    }
    println!(
        "criterion 6: PASS (per-interval containment {per_interval:?} of 20 runs, all four jointly in {all_four}/20; published table matched by the rising-value set — see ledger)"
    );
}

#[test]
fn criterion_07_minimum_statistics() {
    let k = knots(&[(0.0, 0.0), (0.25, 0.0), (0.5, 0.0), (0.75, 0.0), (1.0, 0.0)]);
    let mut rng = RngHandle::new(42);
    let n = 10_000;
    let mut draws: Vec<f64> = (0..n).map(|_| simulate_global_min(&k, &mut rng).value).collect();
    draws.sort_unstable_by(f64::total_cmp);
    let mean = common::mean(&draws);
    let se = common::sample_sd(&draws) / (n as f64).sqrt();
    let (lo, hi) = (-0.4939 - 3.0 * se, -0.4884 + 3.0 * se);
    assert!(mean >= lo && mean <= hi, "mean={mean} outside [{lo}, {hi}]");
    let median = quantile_sorted(&draws, 0.5);
    assert!((median - (-0.4814)).abs() < 0.02, "median={median}");
    println!("criterion 7: PASS (mean {mean:.4} in published interval + 3 SE; median {median:.4} within 0.02 of -0.4814)");
}

#[test]
fn criterion_08_benchmark_reproduction() {
    let replicates = bench_replicates();
    let seed = 11_000;
    let overlaps = |ci: (f64, f64), paper: (f64, f64)| ci.0 <= paper.1 && paper.0 <= ci.1;

    #[allow(clippy::type_complexity)]
    let table2: [(f64, [(usize, (f64, f64), (f64, f64)); 3]); 2] = [
        (
            1.0,
            [
                (2, (0.2390, 0.2517), (0.2547, 0.2729)),
                (8, (0.1659, 0.1745), (0.1759, 0.1891)),
                (64, (0.0663, 0.0694), (0.0778, 0.0838)),
            ],
        ),
        (
            0.0,
            [
                (2, (0.3417, 0.3549), (0.3791, 0.4012)),
                (8, (0.1944, 0.2023), (0.2183, 0.2317)),
                (64, (0.0712, 0.0741), (0.0851, 0.0910)),
            ],
        ),
    ];
    let mut cells = 0;
    for (x1, rows) in &table2 {
        let bridge = Segment::new(0.0, 1.0, 0.0, *x1).unwrap();
        for (n, eqd_ci, rnd_ci) in rows {
            let cfg = BenchConfig::new(bridge, replicates, 1000, seed);
            let reports = run_benchmark(
                &cfg,
                &[Strategy::new(StrategyKind::Eqd, *n), Strategy::new(StrategyKind::Rnd, *n)],
            )
            .unwrap();
            assert!(
                overlaps(reports[0].ci, *eqd_ci),
                "x1={x1} n={n} eqd {:?} vs {eqd_ci:?}",
                reports[0].ci
            );
            assert!(
                overlaps(reports[1].ci, *rnd_ci),
                "x1={x1} n={n} rnd {:?} vs {rnd_ci:?}",
                reports[1].ci
            );
            cells += 2;
        }
    }

    // The published equal-probability intervals come from the coupled
    // procedure (eqp revealed on the shared path, estimate from all
    // points): the interval widths match only under coupling.
    let bridge = Segment::new(0.0, 1.0, 0.0, 1.0).unwrap();
    for (n, paper) in [(2usize, (0.1975, 0.2144)), (8, (0.1275, 0.1387))] {
        let mut cfg = BenchConfig::new(bridge, replicates, 1000, seed);
        cfg.couple_eqp = true;
        let reports = run_benchmark(
            &cfg,
            &[
                Strategy::new(StrategyKind::Eqd, n),
                Strategy::new(StrategyKind::Rnd, n),
                Strategy::new(StrategyKind::Eqp, n),
            ],
        )
        .unwrap();
        assert!(
            overlaps(reports[2].ci, paper),
            "eqp n={n}: {:?} vs {paper:?}",
            reports[2].ci
        );
        cells += 1;
    }
    println!(
        "criterion 8: PASS ({cells}/{cells} published benchmark intervals overlapped at {replicates} replicates{})",
        if full_bench() { " [full scale]" } else { "" }
    );
}

#[test]
fn criterion_09_strategy_orderings() {
    let ns = [2usize, 4, 8, 16, 32, 64];
    let bridge0 = Segment::new(0.0, 1.0, 0.0, 0.0).unwrap();
    let mut ratio64 = Vec::new();
    for seed in [21_000u64, 21_001] {
        let cfg = BenchConfig::new(bridge0, 1000, 1000, seed);
        let trend = strategy_ratio_trend(&cfg, &ns).unwrap();
        for &(n, ratio) in &trend {
            assert!(ratio < 1.0, "seed {seed} n={n}: eqd/rnd ratio {ratio} not below 1");
            assert!(ratio > 0.0);
        }
        let first = trend.first().unwrap().1;
        let last = trend.last().unwrap().1;
        assert!(last < first, "seed {seed}: ratio did not decrease ({first} -> {last})");
        assert!(
            (0.75..=0.92).contains(&last),
            "seed {seed}: ratio at n=64 is {last}"
        );
        ratio64.push(last);
    }

    // Equal-probability sampling has the lowest mean error of the three on
    // the unit-slope bridge.
    let bridge1 = Segment::new(0.0, 1.0, 0.0, 1.0).unwrap();
    for n in [2usize, 8] {
        let cfg = BenchConfig::new(bridge1, 1000, 1000, 21_000);
        let reports = run_benchmark(
            &cfg,
            &[
                Strategy::new(StrategyKind::Eqd, n),
                Strategy::new(StrategyKind::Rnd, n),
                Strategy::new(StrategyKind::Eqp, n),
            ],
        )
        .unwrap();
        assert!(
            reports[2].mean < reports[0].mean && reports[2].mean < reports[1].mean,
            "n={n}: eqp mean {} not lowest",
            reports[2].mean
        );
    }
    println!(
        "criterion 9: PASS (eqd < rnd at every n in every seeded run; eqp lowest; eqd/rnd at n=64 = {ratio64:?} within [0.75, 0.92])"
    );
}

#[test]
fn criterion_10_rigorous_rectangle_path() {
    let k = set1();
    let eps = 1e-6;
    let gk = interval_prob(&k, 0, &QuadConfig::default(), None).unwrap();
    let cfg = QuadConfig {
        eps,
        method: QuadMethod::RigorousRectangle,
        max_evals: 2_000_000_000,
        ..QuadConfig::default()
    };
    let rect = interval_prob(&k, 0, &cfg, None).unwrap();
    assert!(rect.converged);
    let bound = rect.rigorous_bound.unwrap();
    assert!(bound <= 2.0 * eps, "bound={bound}");
    let diff = (rect.value - gk.value).abs();
    assert!(diff <= eps, "|rect - gk| = {diff} > {eps}");
    println!(
        "criterion 10: PASS (|rect - gk| = {diff:.3e} <= 1e-6, proven bound {bound:.3e} <= 2e-6, {} evaluations)",
        rect.evals
    );
}
