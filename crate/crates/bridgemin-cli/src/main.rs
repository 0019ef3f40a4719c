//! `bridgemin` — minimum law of a Brownian bridge conditioned through given
//! points: interval probabilities by quadrature, closed-form pairwise
//! comparisons, exact simulation of the minimum and its location, and the
//! non-adaptive strategy benchmark.
//!
//! Exit codes: 0 success, 1 input error, 2 numerical non-convergence
//! (results are still emitted, flagged), 3 unsupported configuration.

// Negated comparisons below double as NaN guards.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use bridgemin::analytic::{pairwise_prob_closed_d2, pairwise_prob_closed_l2};
use bridgemin::bench::{eqp_points, run_benchmark, BenchConfig, BenchError, Strategy, StrategyKind};
use bridgemin::quadrature::{interval_prob, pairwise_prob, QuadError};
use bridgemin::sampler::{
    freq_report, histogram_and_kde, simulate_global_argmin, simulate_global_min, SamplerError,
};
use bridgemin::{PairwiseConfig, QuadConfig, QuadMethod, QuadResult, RngHandle, Segment};

mod knots_csv;
mod output;

use output::{csv_table, emit, fmt_real, json_report, knots_json, Format, Json};

const EXIT_NONCONVERGED: i32 = 2;
const EXIT_UNSUPPORTED: i32 = 3;

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn nonconverged() -> Self {
        Failure {
            code: EXIT_NONCONVERGED,
            message: "numerical non-convergence; results emitted and flagged".into(),
        }
    }

    fn unsupported(message: impl Into<String>) -> Self {
        Failure { code: EXIT_UNSUPPORTED, message: message.into() }
    }

    fn io(err: std::io::Error) -> Self {
        Failure { code: 1, message: err.to_string() }
    }
}

#[derive(Parser)]
#[command(
    name = "bridgemin",
    version,
    about = "Law of the minimum of a Brownian bridge conditioned through given points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Probability that the path minimum falls in each inter-knot interval
    IntervalProb(IntervalProbArgs),
    /// Probability that one bridge's minimum undercuts another's
    Pairwise(PairwiseArgs),
    /// Exact draws of the global minimum, its location, or interval frequencies
    Simulate(SimulateArgs),
    /// Score non-adaptive sampling strategies on bridge paths
    Benchmark(BenchmarkArgs),
    /// Equal-probability sampling points for a bridge on [0, 1]
    EqpKnots(EqpKnotsArgs),
}

#[derive(Args)]
struct IntervalProbArgs {
    /// Knots CSV file (header `t,x`)
    knots: PathBuf,
    /// Target absolute error
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    /// adaptive-gk | rigorous-rectangle | riemann-left | riemann-random
    #[arg(long, default_value = "adaptive-gk")]
    method: String,
    /// Compute a single interval index
    #[arg(long, conflicts_with = "all")]
    index: Option<usize>,
    /// Compute every interval (the default)
    #[arg(long)]
    all: bool,
    /// Integrate on the original half-line instead of the transformed (0,1]
    /// domain (adaptive-gk only)
    #[arg(long)]
    no_transform: bool,
    /// Integrand evaluation budget
    #[arg(long, default_value_t = 10_000_000)]
    max_evals: u64,
    /// RNG seed (consumed by riemann-random)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PairwiseArgs {
    /// First bridge length (with --d1/--l2/--d2/--xi)
    #[arg(long, requires_all = ["d1", "l2", "d2", "xi"])]
    l1: Option<f64>,
    /// First bridge endpoint gap
    #[arg(long)]
    d1: Option<f64>,
    /// Second bridge length
    #[arg(long)]
    l2: Option<f64>,
    /// Second bridge endpoint gap
    #[arg(long)]
    d2: Option<f64>,
    /// Floor offset min(x3,x4) - min(x1,x2)
    #[arg(long)]
    xi: Option<f64>,
    /// Closed form for bridge (0,0)->(0.5,0) against (0.5,0)->(1,d2)
    #[arg(long, conflicts_with_all = ["l1", "d1", "l2", "d2", "xi", "closed_l2"])]
    closed_d2: Option<f64>,
    /// Closed form for bridge (0,0)->(0.5,0) against a zero-gap bridge of length l2
    #[arg(long, conflicts_with_all = ["l1", "d1", "l2", "d2", "xi"])]
    closed_l2: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    /// adaptive-gk | rigorous-rectangle | riemann-left | riemann-random
    #[arg(long, default_value = "adaptive-gk")]
    method: String,
    #[arg(long, default_value_t = 10_000_000)]
    max_evals: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Knots CSV file (header `t,x`)
    knots: PathBuf,
    /// Number of draws
    #[arg(long)]
    draws: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// min | argmin | freq
    #[arg(long, default_value = "min")]
    what: String,
    /// Also emit a histogram/KDE table with this many bins (min: over
    /// values; argmin: over locations)
    #[arg(long)]
    bins: Option<usize>,
    /// Confidence level for freq intervals
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    /// Sample/report destination (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Histogram destination (default stdout, after the samples)
    #[arg(long)]
    hist_out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Bridge endpoint values x0 x1; the bridge spans [0, 1]
    #[arg(long, num_args = 2, value_names = ["X0", "X1"], required = true, allow_negative_numbers = true)]
    bridge: Vec<f64>,
    /// Comma-separated point budgets, e.g. 2,8,64
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Comma-separated strategies out of eqd,rnd,eqp
    #[arg(long, value_delimiter = ',', default_value = "eqd,rnd")]
    strategies: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    replicates: usize,
    /// Monte Carlo draws behind each true-minimum estimate
    #[arg(long, default_value_t = 1000)]
    inner: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Reveal eqp points on the shared path instead of an independent one
    #[arg(long)]
    couple_eqp: bool,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    /// Summary destination (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the per-replicate error table (CSV) to this file
    #[arg(long)]
    out_replicates: Option<PathBuf>,
}

#[derive(Args)]
struct EqpKnotsArgs {
    /// Bridge endpoint values x0 x1; the bridge spans [0, 1]
    #[arg(long, num_args = 2, value_names = ["X0", "X1"], required = true, allow_negative_numbers = true)]
    bridge: Vec<f64>,
    /// Number of interior points
    #[arg(long)]
    n: usize,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    std::process::exit(0);
                }
                _ => {
                    eprint!("{e}");
                    std::process::exit(1);
                }
            }
        }
    };
    let result = match cli.command {
        Command::IntervalProb(a) => run_interval_prob(a),
        Command::Pairwise(a) => run_pairwise(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Benchmark(a) => run_benchmark_cmd(a),
        Command::EqpKnots(a) => run_eqp_knots(a),
    };
    if let Err(failure) = result {
        if !failure.message.is_empty() {
            eprintln!("bridgemin: {}", failure.message);
        }
        std::process::exit(failure.code);
    }
}

fn parse_format(s: &str) -> Result<Format, Failure> {
    s.parse().map_err(Failure::input)
}

fn parse_method(s: &str) -> Result<QuadMethod, Failure> {
    s.parse().map_err(Failure::input)
}

fn quad_failure(e: QuadError) -> Failure {
    Failure::input(e.to_string())
}

fn sampler_failure(e: SamplerError) -> Failure {
    match e {
        SamplerError::EnvelopeExceeded => Failure::nonconverged(),
        other => Failure::input(other.to_string()),
    }
}

fn bench_failure(e: BenchError) -> Failure {
    match e {
        BenchError::EqpUnsupported => Failure::unsupported(e.to_string()),
        BenchError::Sampler(s) => sampler_failure(s),
        other => Failure::input(other.to_string()),
    }
}

fn quad_result_json(r: &QuadResult) -> Vec<(&'static str, Json)> {
    vec![
        ("value", Json::Num(r.value)),
        ("est_error", Json::Num(r.est_error)),
        (
            "rigorous_bound",
            r.rigorous_bound.map_or(Json::Null, Json::Num),
        ),
        ("evals", Json::Int(r.evals)),
        ("converged", Json::Bool(r.converged)),
    ]
}

fn run_interval_prob(a: IntervalProbArgs) -> Result<(), Failure> {
    let format = parse_format(&a.format)?;
    let method = parse_method(&a.method)?;
    let knots = knots_csv::read_knots(&a.knots).map_err(Failure::input)?;
    let cfg = QuadConfig { eps: a.eps, method, transform: !a.no_transform, max_evals: a.max_evals };
    let mut rng = RngHandle::new(a.seed);

    let indices: Vec<usize> = match a.index {
        Some(i) => vec![i],
        None => (0..knots.segment_count()).collect(),
    };
    let mut results = Vec::with_capacity(indices.len());
    for &i in &indices {
        let r = interval_prob(&knots, i, &cfg, Some(&mut rng)).map_err(quad_failure)?;
        results.push((i, r));
    }

    let content = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|(i, r)| {
                    vec![
                        i.to_string(),
                        fmt_real(knots.times()[*i]),
                        fmt_real(knots.times()[*i + 1]),
                        fmt_real(r.value),
                        fmt_real(r.est_error),
                        r.rigorous_bound.map(fmt_real).unwrap_or_default(),
                        r.evals.to_string(),
                        r.converged.to_string(),
                    ]
                })
                .collect();
            csv_table(
                "interval,t_lo,t_hi,value,est_error,rigorous_bound,evals,converged",
                &rows,
            )
        }
        Format::Json => {
            let items = results
                .iter()
                .map(|(i, r)| {
                    let mut fields = vec![
                        ("interval", Json::Int(*i as u64)),
                        ("t_lo", Json::Num(knots.times()[*i])),
                        ("t_hi", Json::Num(knots.times()[*i + 1])),
                    ];
                    fields.extend(quad_result_json(r));
                    Json::Obj(fields)
                })
                .collect();
            json_report(
                "interval-prob",
                vec![
                    ("knots", knots_json(&knots)),
                    ("eps", Json::Num(a.eps)),
                    ("method", Json::Str(method.name().into())),
                    ("transform", Json::Bool(!a.no_transform)),
                    ("max_evals", Json::Int(a.max_evals)),
                    ("seed", Json::Int(a.seed)),
                ],
                vec![("results", Json::Arr(items))],
            )
        }
    };
    emit(&a.out, &content).map_err(Failure::io)?;

    if results.iter().any(|(_, r)| !r.converged) {
        return Err(Failure::nonconverged());
    }
    Ok(())
}

fn run_pairwise(a: PairwiseArgs) -> Result<(), Failure> {
    let format = parse_format(&a.format)?;
    let method = parse_method(&a.method)?;
    let cfg = QuadConfig { eps: a.eps, method, transform: true, max_evals: a.max_evals };
    let mut rng = RngHandle::new(a.seed);

    // route name, value, quadrature detail
    let mut rows: Vec<(&'static str, f64, Option<QuadResult>)> = Vec::new();
    let mut config_echo: Vec<(&'static str, Json)> = Vec::new();

    if let Some(d2) = a.closed_d2 {
        if !(d2 >= 0.0) {
            return Err(Failure::input("--closed-d2 requires d2 >= 0"));
        }
        config_echo.push(("closed_d2", Json::Num(d2)));
        rows.push(("closed-d2", pairwise_prob_closed_d2(d2), None));
        let pw = PairwiseConfig::from_params(0.5, 0.0, 0.5, d2, 0.0)
            .map_err(|e| Failure::input(e.to_string()))?;
        let r = pairwise_prob(&pw, &cfg, Some(&mut rng)).map_err(quad_failure)?;
        rows.push(("quadrature", r.value, Some(r)));
    } else if let Some(l2) = a.closed_l2 {
        if !(l2 > 0.0) {
            return Err(Failure::input("--closed-l2 requires l2 > 0"));
        }
        config_echo.push(("closed_l2", Json::Num(l2)));
        rows.push(("closed-l2", pairwise_prob_closed_l2(l2), None));
        let pw = PairwiseConfig::from_params(0.5, 0.0, l2, 0.0, 0.0)
            .map_err(|e| Failure::input(e.to_string()))?;
        let r = pairwise_prob(&pw, &cfg, Some(&mut rng)).map_err(quad_failure)?;
        rows.push(("quadrature", r.value, Some(r)));
    } else {
        let (Some(l1), Some(d1), Some(l2), Some(d2), Some(xi)) = (a.l1, a.d1, a.l2, a.d2, a.xi)
        else {
            return Err(Failure::input(
                "pass either --closed-d2, --closed-l2, or all of --l1 --d1 --l2 --d2 --xi",
            ));
        };
        config_echo.extend([
            ("l1", Json::Num(l1)),
            ("d1", Json::Num(d1)),
            ("l2", Json::Num(l2)),
            ("d2", Json::Num(d2)),
            ("xi", Json::Num(xi)),
        ]);
        let pw = PairwiseConfig::from_params(l1, d1, l2, d2, xi)
            .map_err(|e| Failure::input(e.to_string()))?;
        let r = pairwise_prob(&pw, &cfg, Some(&mut rng)).map_err(quad_failure)?;
        rows.push(("quadrature", r.value, Some(r)));
        // Closed forms cross-check the quadrature whenever the parameters
        // fall in one of the explicit one-parameter families.
        if l1 == 0.5 && d1 == 0.0 && xi == 0.0 {
            if l2 == 0.5 {
                rows.push(("closed-d2", pairwise_prob_closed_d2(d2), None));
            }
            if d2 == 0.0 {
                rows.push(("closed-l2", pairwise_prob_closed_l2(l2), None));
            }
        }
    }

    config_echo.extend([
        ("eps", Json::Num(a.eps)),
        ("method", Json::Str(method.name().into())),
        ("seed", Json::Int(a.seed)),
    ]);

    let content = match format {
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|(route, value, detail)| {
                    vec![
                        route.to_string(),
                        fmt_real(*value),
                        detail.as_ref().map(|r| fmt_real(r.est_error)).unwrap_or_default(),
                        detail.as_ref().map(|r| r.evals.to_string()).unwrap_or_default(),
                        detail.as_ref().map(|r| r.converged.to_string()).unwrap_or_default(),
                    ]
                })
                .collect();
            csv_table("route,value,est_error,evals,converged", &table)
        }
        Format::Json => {
            let items = rows
                .iter()
                .map(|(route, value, detail)| {
                    let mut fields =
                        vec![("route", Json::Str(route.to_string())), ("value", Json::Num(*value))];
                    if let Some(r) = detail {
                        fields.extend(quad_result_json(r));
                    }
                    Json::Obj(fields)
                })
                .collect();
            json_report("pairwise", config_echo, vec![("results", Json::Arr(items))])
        }
    };
    emit(&a.out, &content).map_err(Failure::io)?;

    if rows.iter().any(|(_, _, d)| d.as_ref().is_some_and(|r| !r.converged)) {
        return Err(Failure::nonconverged());
    }
    Ok(())
}

fn run_simulate(a: SimulateArgs) -> Result<(), Failure> {
    let format = parse_format(&a.format)?;
    let knots = knots_csv::read_knots(&a.knots).map_err(Failure::input)?;
    if a.draws < 1 {
        return Err(Failure::input("--draws must be at least 1"));
    }
    let mut rng = RngHandle::new(a.seed);
    let config_echo = |what: &str| {
        vec![
            ("knots", knots_json(&knots)),
            ("draws", Json::Int(a.draws)),
            ("seed", Json::Int(a.seed)),
            ("what", Json::Str(what.into())),
            ("level", Json::Num(a.level)),
        ]
    };

    match a.what.as_str() {
        "min" => {
            let samples: Vec<f64> =
                (0..a.draws).map(|_| simulate_global_min(&knots, &mut rng).value).collect();
            let hist = match a.bins {
                Some(bins) => {
                    Some(histogram_and_kde(&samples, bins, None).map_err(sampler_failure)?)
                }
                None => None,
            };
            match format {
                Format::Csv => {
                    let rows: Vec<Vec<String>> =
                        samples.iter().map(|v| vec![fmt_real(*v)]).collect();
                    emit(&a.out, &csv_table("value", &rows)).map_err(Failure::io)?;
                    if let Some(hist) = &hist {
                        emit_histogram_csv(&a, hist)?;
                    }
                }
                Format::Json => {
                    let mut body = vec![(
                        "samples",
                        Json::Arr(samples.iter().map(|&v| Json::Num(v)).collect()),
                    )];
                    if let Some(hist) = &hist {
                        body.push(("histogram", histogram_json(hist)));
                    }
                    emit(&a.out, &json_report("simulate", config_echo("min"), body))
                        .map_err(Failure::io)?;
                }
            }
        }
        "argmin" => {
            let mut samples = Vec::with_capacity(a.draws as usize);
            for _ in 0..a.draws {
                samples.push(simulate_global_argmin(&knots, &mut rng).map_err(sampler_failure)?);
            }
            let hist = match a.bins {
                Some(bins) => {
                    let locations: Vec<f64> = samples.iter().map(|s| s.location).collect();
                    Some(histogram_and_kde(&locations, bins, None).map_err(sampler_failure)?)
                }
                None => None,
            };
            match format {
                Format::Csv => {
                    let rows: Vec<Vec<String>> = samples
                        .iter()
                        .map(|s| {
                            vec![s.segment.to_string(), fmt_real(s.min_value), fmt_real(s.location)]
                        })
                        .collect();
                    emit(&a.out, &csv_table("segment,value,location", &rows))
                        .map_err(Failure::io)?;
                    if let Some(hist) = &hist {
                        emit_histogram_csv(&a, hist)?;
                    }
                }
                Format::Json => {
                    let items = samples
                        .iter()
                        .map(|s| {
                            Json::Obj(vec![
                                ("segment", Json::Int(s.segment as u64)),
                                ("value", Json::Num(s.min_value)),
                                ("location", Json::Num(s.location)),
                            ])
                        })
                        .collect();
                    let mut body = vec![("samples", Json::Arr(items))];
                    if let Some(hist) = &hist {
                        body.push(("histogram", histogram_json(hist)));
                    }
                    emit(&a.out, &json_report("simulate", config_echo("argmin"), body))
                        .map_err(Failure::io)?;
                }
            }
        }
        "freq" => {
            let report =
                freq_report(&knots, a.draws, a.level, &mut rng).map_err(sampler_failure)?;
            let est = report.point_estimates();
            match format {
                Format::Csv => {
                    let rows: Vec<Vec<String>> = report
                        .counts
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| {
                            vec![
                                i.to_string(),
                                fmt_real(knots.times()[i]),
                                fmt_real(knots.times()[i + 1]),
                                c.to_string(),
                                fmt_real(est[i]),
                                fmt_real(report.intervals[i].0),
                                fmt_real(report.intervals[i].1),
                            ]
                        })
                        .collect();
                    emit(
                        &a.out,
                        &csv_table("interval,t_lo,t_hi,count,freq,ci_lo,ci_hi", &rows),
                    )
                    .map_err(Failure::io)?;
                }
                Format::Json => {
                    let items = report
                        .counts
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| {
                            Json::Obj(vec![
                                ("interval", Json::Int(i as u64)),
                                ("t_lo", Json::Num(knots.times()[i])),
                                ("t_hi", Json::Num(knots.times()[i + 1])),
                                ("count", Json::Int(c)),
                                ("freq", Json::Num(est[i])),
                                ("ci_lo", Json::Num(report.intervals[i].0)),
                                ("ci_hi", Json::Num(report.intervals[i].1)),
                            ])
                        })
                        .collect();
                    emit(
                        &a.out,
                        &json_report("simulate", config_echo("freq"), vec![(
                            "freq",
                            Json::Arr(items),
                        )]),
                    )
                    .map_err(Failure::io)?;
                }
            }
        }
        other => return Err(Failure::input(format!("--what {other}: expected min | argmin | freq"))),
    }
    Ok(())
}

fn emit_histogram_csv(a: &SimulateArgs, hist: &[bridgemin::sampler::HistBin]) -> Result<(), Failure> {
    let rows: Vec<Vec<String>> = hist
        .iter()
        .map(|b| vec![fmt_real(b.center), b.count.to_string(), fmt_real(b.kde)])
        .collect();
    let table = csv_table("bin_center,count,kde", &rows);
    match (&a.hist_out, &a.out) {
        (Some(path), _) => emit(&Some(path.clone()), &table).map_err(Failure::io),
        // Both tables on stdout: separate with a blank line.
        (None, None) => {
            println!();
            emit(&None, &table).map_err(Failure::io)
        }
        (None, Some(_)) => emit(&None, &table).map_err(Failure::io),
    }
}

fn histogram_json(hist: &[bridgemin::sampler::HistBin]) -> Json {
    Json::Arr(
        hist.iter()
            .map(|b| {
                Json::Obj(vec![
                    ("bin_center", Json::Num(b.center)),
                    ("count", Json::Int(b.count)),
                    ("kde", Json::Num(b.kde)),
                ])
            })
            .collect(),
    )
}

fn run_benchmark_cmd(a: BenchmarkArgs) -> Result<(), Failure> {
    let format = parse_format(&a.format)?;
    let kinds: Vec<StrategyKind> = a
        .strategies
        .iter()
        .map(|s| s.parse().map_err(Failure::input))
        .collect::<Result<_, _>>()?;
    if kinds.is_empty() {
        return Err(Failure::input("--strategies must name at least one of eqd,rnd,eqp"));
    }
    if a.n.is_empty() || a.n.iter().any(|&n| n < 1) {
        return Err(Failure::input("--n entries must be at least 1"));
    }
    let bridge = Segment::new(0.0, 1.0, a.bridge[0], a.bridge[1])
        .map_err(|e| Failure::input(e.to_string()))?;
    let cfg = BenchConfig {
        bridge,
        replicates: a.replicates,
        inner_min_samples: a.inner,
        level: a.level,
        seed: a.seed,
        couple_eqp: a.couple_eqp,
    };

    let mut summary_rows: Vec<Vec<String>> = Vec::new();
    let mut summary_json: Vec<Json> = Vec::new();
    let mut replicate_rows: Vec<Vec<String>> = Vec::new();
    for &n in &a.n {
        let strategies: Vec<Strategy> =
            kinds.iter().map(|&k| Strategy::new(k, n)).collect();
        let reports = run_benchmark(&cfg, &strategies).map_err(bench_failure)?;
        for r in &reports {
            summary_rows.push(vec![
                r.strategy.kind.name().to_string(),
                n.to_string(),
                fmt_real(r.mean),
                fmt_real(r.variance),
                fmt_real(r.ci.0),
                fmt_real(r.ci.1),
            ]);
            summary_json.push(Json::Obj(vec![
                ("strategy", Json::Str(r.strategy.kind.name().into())),
                ("n_points", Json::Int(n as u64)),
                ("mean", Json::Num(r.mean)),
                ("var", Json::Num(r.variance)),
                ("ci_lo", Json::Num(r.ci.0)),
                ("ci_hi", Json::Num(r.ci.1)),
            ]));
            if a.out_replicates.is_some() {
                for (idx, &e) in r.errors.iter().enumerate() {
                    replicate_rows.push(vec![
                        r.strategy.kind.name().to_string(),
                        n.to_string(),
                        idx.to_string(),
                        fmt_real(e),
                    ]);
                }
            }
        }
    }

    let content = match format {
        Format::Csv => csv_table("strategy,n_points,mean,var,ci_lo,ci_hi", &summary_rows),
        Format::Json => json_report(
            "benchmark",
            vec![
                (
                    "bridge",
                    Json::Arr(vec![Json::Num(a.bridge[0]), Json::Num(a.bridge[1])]),
                ),
                ("n", Json::Arr(a.n.iter().map(|&n| Json::Int(n as u64)).collect())),
                (
                    "strategies",
                    Json::Arr(kinds.iter().map(|k| Json::Str(k.name().into())).collect()),
                ),
                ("replicates", Json::Int(a.replicates as u64)),
                ("inner", Json::Int(a.inner as u64)),
                ("level", Json::Num(a.level)),
                ("seed", Json::Int(a.seed)),
                ("couple_eqp", Json::Bool(a.couple_eqp)),
            ],
            vec![("summary", Json::Arr(summary_json))],
        ),
    };
    emit(&a.out, &content).map_err(Failure::io)?;
    if let Some(path) = &a.out_replicates {
        emit(
            &Some(path.clone()),
            &csv_table("strategy,n_points,replicate,error", &replicate_rows),
        )
        .map_err(Failure::io)?;
    }
    Ok(())
}

fn run_eqp_knots(a: EqpKnotsArgs) -> Result<(), Failure> {
    let format = parse_format(&a.format)?;
    if a.n < 1 {
        return Err(Failure::input("--n must be at least 1"));
    }
    let bridge = Segment::new(0.0, 1.0, a.bridge[0], a.bridge[1])
        .map_err(|e| Failure::input(e.to_string()))?;
    let points = eqp_points(&bridge, a.n).map_err(bench_failure)?;

    let content = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = points.iter().map(|&t| vec![fmt_real(t)]).collect();
            csv_table("t", &rows)
        }
        Format::Json => json_report(
            "eqp-knots",
            vec![
                (
                    "bridge",
                    Json::Arr(vec![Json::Num(a.bridge[0]), Json::Num(a.bridge[1])]),
                ),
                ("n", Json::Int(a.n as u64)),
            ],
            vec![("points", Json::Arr(points.iter().map(|&t| Json::Num(t)).collect()))],
        ),
    };
    emit(&a.out, &content).map_err(Failure::io)
}
