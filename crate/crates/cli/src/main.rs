//! Command-line surface: constants tables, Cheeger estimation, the lemma
//! battery, Monte Carlo estimation, and one verifier per bound, plus a
//! `suite` subcommand running the whole battery.
//!
//! Exit codes: 0 all pass, 1 usage/configuration error, 2 any fail
//! verdict, 3 inconclusive verdicts but no failures (retry with more
//! samples).

use clap::{Args, Parser, Subcommand};
use heavytail_core::cheeger::{grid_bruteforce, half_line_scan, CheegerEstimate};
use heavytail_core::constants;
use heavytail_core::error::{Error, Result};
use heavytail_core::experiments::{self, suite};
use heavytail_core::lipschitz;
use heavytail_core::measure;
use heavytail_core::montecarlo::{estimate_variance, EstimationPlan};
use heavytail_core::report::{BoundReport, OutputFormat, ReportDocument, Verdict};
use serde_json::json;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "heavytail",
    about = "Heavy-tailed isoperimetric constants and variance-bound verification",
    version,
    after_help = "Measures: pareto:lambda=L, laplace:rate=T, extremal:alpha=A,cheeger=I, uniform:lo=A,hi=B\n\
                  Functions: identity, max, activation:m=M, scaled_sum:p=P, l2_norm, linear:w=a/b, dist_box:box=lo..hi x lo..hi,cap=C"
)]
struct Cli {
    /// Master seed; every job derives its own stream from it.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Report directory (defaults to $HEAVYTAIL_OUT or ./reports).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format: csv, json, or both.
    #[arg(long, global = true, default_value = "both")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the explicit bound constants for given parameters.
    Constants(ConstantsArgs),
    /// Estimate the alpha-Cheeger constant of a 1-D measure.
    CheegerEstimate(CheegerArgs),
    /// Run the quantile-lemma battery on a measure with a certificate.
    Lemmas(LemmasArgs),
    /// Monte Carlo estimation of Var(f) under a product measure.
    Estimate(EstimateArgs),
    /// Verify the power-law product variance bound across dimensions.
    VerifyPareto(VerifyParetoArgs),
    /// Verify the product-measure variance bound for one function.
    VerifyProduct(VerifyProductArgs),
    /// Verify the d_p variance bound.
    VerifyDp(VerifyDpArgs),
    /// Verify centered tail bounds against the extremal law.
    VerifyTails(VerifyTailsArgs),
    /// Verify the box-distance isoperimetric bound.
    VerifyIsoperimetric(VerifyIsoArgs),
    /// Verify the sharp d_p bound under a classical Poincare constant.
    VerifyPoincareDp(VerifyPoincareArgs),
    /// Verify the eigenvalue variance bound for random symmetric matrices.
    VerifyMatrix(VerifyMatrixArgs),
    /// Closed-form tightness analysis of the ramp family.
    Tightness(TightnessArgs),
    /// Run the full verification battery.
    Suite,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    cheeger: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args)]
struct CheegerArgs {
    #[arg(long)]
    measure: String,
    #[arg(long)]
    alpha: f64,
    /// half_line, bruteforce, or both.
    #[arg(long, default_value = "both")]
    method: String,
    #[arg(long, default_value_t = 4096)]
    grid: usize,
    #[arg(long, default_value_t = 16)]
    cells: u32,
}

#[derive(Args)]
struct LemmasArgs {
    #[arg(long, default_value = "pareto:lambda=5")]
    measure: String,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    cheeger: Option<f64>,
    /// Ramp thresholds, comma separated.
    #[arg(long, default_value = "2,4", value_delimiter = ',')]
    ramps: Vec<f64>,
    #[arg(long, default_value_t = 4096)]
    grid: usize,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long, default_value = "pareto:lambda=5")]
    measure: String,
    /// Convenience for --measure pareto:lambda=L.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long = "fn", default_value = "max")]
    function: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 32)]
    batches: usize,
}

#[derive(Args)]
struct VerifyParetoArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long, value_delimiter = ',', default_value = "16,64,256,1024")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 32)]
    batches: usize,
    #[arg(long = "fn", default_value = "max")]
    function: String,
    #[arg(long, default_value_t = 0.1)]
    slope_tol: f64,
}

#[derive(Args)]
struct VerifyProductArgs {
    #[arg(long, default_value = "pareto:lambda=5")]
    measure: String,
    /// Cheeger-level certificate (alpha, I); the Poincare pair is derived.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    cheeger: Option<f64>,
    /// Explicit variance-Poincare certificate, overriding the derivation.
    #[arg(long)]
    poincare_alpha: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long = "fn", default_value = "max")]
    function: String,
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 32)]
    batches: usize,
}

#[derive(Args)]
struct VerifyDpArgs {
    #[arg(long, default_value = "pareto:lambda=5")]
    measure: String,
    /// Metric exponent; "inf" selects the sup metric.
    #[arg(long)]
    p: String,
    /// Certificate branch: c1 (first-moment) or c2 (variance).
    #[arg(long, default_value = "c1")]
    cert: String,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    cheeger: Option<f64>,
    #[arg(long = "fn")]
    function: String,
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 32)]
    batches: usize,
}

#[derive(Args)]
struct VerifyTailsArgs {
    #[arg(long, default_value = "pareto:lambda=5")]
    measure: String,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    cheeger: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4")]
    thresholds: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 32)]
    batches: usize,
    /// Treat the upper-tail bound as attained (two-sided check).
    #[arg(long, default_value_t = false)]
    attained_upper: bool,
    #[arg(long, default_value_t = false)]
    attained_lower: bool,
}

#[derive(Args)]
struct VerifyIsoArgs {
    #[arg(long, default_value = "pareto:lambda=5")]
    measure: String,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    cheeger: Option<f64>,
    #[arg(long)]
    poincare_alpha: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    /// Box as per-coordinate ranges: "1..1.2 x 1..1.2".
    #[arg(long)]
    box_a: String,
    #[arg(long)]
    box_b: String,
}

#[derive(Args)]
struct VerifyPoincareArgs {
    #[arg(long, default_value = "laplace:rate=1")]
    measure: String,
    #[arg(long, default_value_t = 1.5)]
    p: f64,
    /// Classical Poincare constant; defaults to 4/rate^2 for laplace.
    #[arg(long)]
    poincare_constant: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "8,27,64,125")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 32)]
    batches: usize,
    #[arg(long, default_value_t = 0.05)]
    slope_tol: f64,
}

#[derive(Args)]
struct VerifyMatrixArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    eigen_index: usize,
    #[arg(long, default_value_t = 20)]
    batches: usize,
}

#[derive(Args)]
struct TightnessArgs {
    #[arg(long, default_value_t = 0.8)]
    alpha: f64,
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64,128,256")]
    ms: Vec<f64>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
}

fn main() {
    // behave like a normal unix tool when stdout is closed early
    // (e.g. piped into head)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's default exit code for usage errors is 2, which this
            // tool reserves for failed verdicts
            let _ = e.print();
            std::process::exit(1);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

fn parse_format(s: &str) -> Result<OutputFormat> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        "both" => Ok(OutputFormat::Both),
        other => Err(Error::config(format!(
            "unknown format '{other}' (expected csv, json, or both)"
        ))),
    }
}

fn out_dir(cli_out: &Option<PathBuf>) -> PathBuf {
    cli_out
        .clone()
        .or_else(|| std::env::var_os("HEAVYTAIL_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("reports"))
}

/// Resolve a Cheeger-level certificate (alpha, I) for a measure, either
/// explicit or derived: the power law has the half-line certificate at
/// alpha = (L-1)/L, the two-sided exponential the classical one at
/// alpha = 1 with I = 1/rate.
fn resolve_certificate(
    measure_spec: &str,
    alpha: Option<f64>,
    cheeger: Option<f64>,
) -> Result<(f64, f64)> {
    if let (Some(a), Some(i)) = (alpha, cheeger) {
        return Ok((a, i));
    }
    let spec = heavytail_core::params::Spec::parse(measure_spec)?;
    match spec.name.as_str() {
        "pareto" => {
            let lambda = spec.f64("lambda")?;
            let cert = constants::pareto_cheeger_certificate(lambda)?;
            Ok((
                alpha.unwrap_or(cert.inputs.alpha.expect("certificate alpha")),
                cheeger.unwrap_or(cert.value),
            ))
        }
        "laplace" => {
            let rate = spec.f64("rate")?;
            Ok((alpha.unwrap_or(1.0), cheeger.unwrap_or(1.0 / rate)))
        }
        "extremal" => Ok((
            alpha.unwrap_or(spec.f64("alpha")?),
            cheeger.unwrap_or(spec.f64("cheeger")?),
        )),
        _ => Err(Error::config(
            "no derivable certificate for this measure; pass --alpha and --cheeger",
        )),
    }
}

/// Variance-Poincare certificate (exponent, value) from a Cheeger pair:
/// exponent (3a-2)/a with the variance bound constant.
fn derive_variance_certificate(alpha: f64, cheeger: f64) -> Result<(f64, f64)> {
    let c2 = constants::variance_bound_constant(alpha, cheeger)?.value;
    Ok(((3.0 * alpha - 2.0) / alpha, c2))
}

fn parse_box(s: &str) -> Result<Vec<(f64, f64)>> {
    s.split('x')
        .map(|part| {
            let (lo, hi) = part
                .trim()
                .split_once("..")
                .ok_or_else(|| Error::config("box ranges look like lo..hi, joined by 'x'"))?;
            Ok((
                heavytail_core::params::parse_f64(lo)?,
                heavytail_core::params::parse_f64(hi)?,
            ))
        })
        .collect()
}

fn print_reports(reports: &[BoundReport]) {
    for r in reports {
        let verdict = match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "inconclusive",
        };
        println!(
            "{verdict:>12}  {:<44} lhs={:<13.6e} rhs={:<13.6e} slack={:.3e}",
            r.id, r.lhs, r.rhs, r.slack
        );
    }
}

fn finish(doc: ReportDocument, cli_out: &Option<PathBuf>, format: &str) -> Result<i32> {
    print_reports(&doc.reports);
    let dir = out_dir(cli_out);
    doc.write_files(&dir, &doc.command.clone(), parse_format(format)?)?;
    println!(
        "{} report rows written to {}/{}.*",
        doc.reports.len(),
        dir.display(),
        doc.command
    );
    Ok(doc.exit_code())
}

fn cheeger_to_json(est: &CheegerEstimate) -> serde_json::Value {
    serde_json::to_value(est).expect("serializable estimate")
}

fn run(cli: Cli) -> Result<i32> {
    let seed = cli.seed;
    match &cli.command {
        Command::Constants(a) => run_constants(a, &cli),
        Command::CheegerEstimate(a) => {
            let measure = measure::parse_measure(&a.measure)?;
            let mut doc = ReportDocument::new(
                "cheeger-estimate",
                seed,
                json!({"measure": a.measure, "alpha": a.alpha, "grid": a.grid, "cells": a.cells, "method": a.method}),
            );
            let mut estimates = Vec::new();
            if a.method == "half_line" || a.method == "both" {
                estimates.push(half_line_scan(measure.as_ref(), a.alpha, a.grid)?);
            }
            if a.method == "bruteforce" || a.method == "both" {
                estimates.push(grid_bruteforce(measure.as_ref(), a.alpha, a.cells)?);
            }
            if estimates.is_empty() {
                return Err(Error::config(format!(
                    "unknown method '{}' (expected half_line, bruteforce, or both)",
                    a.method
                )));
            }
            for est in &estimates {
                println!(
                    "{:?} estimate: {} (alpha = {})",
                    est.method, est.value, est.alpha
                );
                doc.config["estimates"] =
                    json!(estimates.iter().map(cheeger_to_json).collect::<Vec<_>>());
            }
            // lower-bound relation between the two estimators when both ran
            if estimates.len() == 2 {
                let hl = estimates[0].value;
                let bf = estimates[1].value;
                doc.reports.push(BoundReport::exact(
                    "cheeger-ordering",
                    heavytail_core::report::Relation::UpperBound,
                    hl,
                    bf + 2.0 / a.cells as f64 * bf,
                    json!({"half_line": hl, "bruteforce": bf}),
                ));
            }
            finish(doc, &cli.out, &cli.format)
        }
        Command::Lemmas(a) => {
            let (alpha, cheeger) = resolve_certificate(&a.measure, a.alpha, a.cheeger)?;
            let cfg = experiments::LemmaSuiteConfig {
                measure: a.measure.clone(),
                alpha,
                cheeger,
                ramp_thresholds: a.ramps.clone(),
                grid: a.grid,
            };
            let mut doc = ReportDocument::new(
                "lemmas",
                seed,
                json!({"measure": a.measure, "alpha": alpha, "cheeger": cheeger, "ramps": a.ramps, "grid": a.grid}),
            );
            doc.reports = experiments::run_lemma_suite(&cfg)?;
            finish(doc, &cli.out, &cli.format)
        }
        Command::Estimate(a) => {
            let spec = match a.lambda {
                Some(l) => format!("pareto:lambda={l}"),
                None => a.measure.clone(),
            };
            let measure = measure::parse_measure(&spec)?;
            let samples = a.samples - a.samples % a.batches;
            let function = lipschitz::parse_lipschitz(&a.function, a.n)?;
            let plan =
                EstimationPlan::new(measure, a.n, function.clone(), samples, seed, a.batches)?;
            let est = estimate_variance(&plan)?;
            println!(
                "mean = {}\nvariance = {} (95% CI [{}, {}])\nbatch-median variance = {}",
                est.mean, est.variance, est.ci_low, est.ci_high, est.batch_median
            );
            let mut doc = ReportDocument::new(
                "estimate",
                seed,
                json!({
                    "measure": spec, "function": function.name(), "n": a.n,
                    "samples": samples, "batches": a.batches,
                    "mean": est.mean, "variance": est.variance,
                    "ci": [est.ci_low, est.ci_high], "batch_median": est.batch_median,
                }),
            );
            doc.reports.push(
                BoundReport::new(
                    "variance-nonnegative",
                    heavytail_core::report::Relation::LowerBound,
                    est.variance,
                    (est.ci_low, est.ci_high),
                    0.0,
                    doc.config.clone(),
                )
                .with_seed(seed)
                .with_samples(samples as u64),
            );
            finish(doc, &cli.out, &cli.format)
        }
        Command::VerifyPareto(a) => {
            let cfg = experiments::ParetoTheoremConfig {
                lambda: a.lambda,
                dims: a.dims.clone(),
                samples: a.samples - a.samples % a.batches,
                seed,
                batches: a.batches,
                function: a.function.clone(),
                slope_tol: a.slope_tol,
            };
            let mut doc = ReportDocument::new(
                "verify-pareto",
                seed,
                json!({"lambda": a.lambda, "dims": a.dims, "samples": cfg.samples, "function": a.function}),
            );
            doc.reports = experiments::verify_pareto_theorem(&cfg)?;
            finish(doc, &cli.out, &cli.format)
        }
        Command::VerifyProduct(a) => {
            let (poincare_alpha, c2_value) = match (a.poincare_alpha, a.c2) {
                (Some(pa), Some(c2)) => (pa, c2),
                _ => {
                    let (alpha, cheeger) = resolve_certificate(&a.measure, a.alpha, a.cheeger)?;
                    derive_variance_certificate(alpha, cheeger)?
                }
            };
            let cfg = experiments::ProductTheoremConfig {
                measure: a.measure.clone(),
                poincare_alpha,
                c2_value,
                function: a.function.clone(),
                n: a.n,
                samples: a.samples - a.samples % a.batches,
                seed,
                batches: a.batches,
            };
            let mut doc = ReportDocument::new(
                "verify-product",
                seed,
                json!({"measure": a.measure, "poincare_alpha": poincare_alpha, "c2": c2_value, "n": a.n}),
            );
            doc.reports = vec![experiments::verify_product_theorem(&cfg)?];
            finish(doc, &cli.out, &cli.format)
        }
        Command::VerifyDp(a) => {
            let p = heavytail_core::params::parse_f64(&a.p)?;
            let (alpha, cheeger) = resolve_certificate(&a.measure, a.alpha, a.cheeger)?;
            let certificate = match a.cert.as_str() {
                // first-moment certificate from the moment bound at beta=2,
                // valid exponent 3a-2
                "c1" => experiments::DpCertificate::MomentL1 {
                    alpha: 3.0 * alpha - 2.0,
                    value: constants::moment_bound_constant(alpha, 2.0, cheeger)?.value,
                },
                "c2" => {
                    let (pa, c2) = derive_variance_certificate(alpha, cheeger)?;
                    experiments::DpCertificate::VarianceL2 {
                        alpha: pa,
                        value: c2,
                    }
                }
                other => {
                    return Err(Error::config(format!(
                        "unknown certificate '{other}' (expected c1 or c2)"
                    )))
                }
            };
            let cfg = experiments::DpTheoremConfig {
                measure: a.measure.clone(),
                p,
                certificate,
                function: a.function.clone(),
                n: a.n,
                samples: a.samples - a.samples % a.batches,
                seed,
                batches: a.batches,
            };
            let mut doc = ReportDocument::new(
                "verify-dp",
                seed,
                json!({"measure": a.measure, "p": a.p, "cert": a.cert, "alpha": alpha, "cheeger": cheeger, "n": a.n}),
            );
            doc.reports = vec![experiments::verify_dp_theorem(&cfg)?];
            finish(doc, &cli.out, &cli.format)
        }
        Command::VerifyTails(a) => {
            let (alpha, cheeger) = resolve_certificate(&a.measure, a.alpha, a.cheeger)?;
            let cfg = experiments::TailBoundsConfig {
                measure: a.measure.clone(),
                alpha,
                cheeger,
                thresholds: a.thresholds.clone(),
                samples: a.samples - a.samples % a.batches,
                seed,
                batches: a.batches,
                attained_upper: a.attained_upper,
                attained_lower: a.attained_lower,
            };
            let mut doc = ReportDocument::new(
                "verify-tails",
                seed,
                json!({"measure": a.measure, "alpha": alpha, "cheeger": cheeger, "thresholds": a.thresholds}),
            );
            doc.reports = experiments::verify_tail_bounds(&cfg)?;
            finish(doc, &cli.out, &cli.format)
        }
        Command::VerifyIsoperimetric(a) => {
            let (poincare_alpha, c2_value) = match (a.poincare_alpha, a.c2) {
                (Some(pa), Some(c2)) => (pa, c2),
                _ => {
                    let (alpha, cheeger) = resolve_certificate(&a.measure, a.alpha, a.cheeger)?;
                    derive_variance_certificate(alpha, cheeger)?
                }
            };
            let cfg = experiments::IsoperimetricConfig {
                measure: a.measure.clone(),
                poincare_alpha,
                c2_value,
                box_a: parse_box(&a.box_a)?,
                box_b: parse_box(&a.box_b)?,
            };
            let mut doc = ReportDocument::new(
                "verify-isoperimetric",
                seed,
                json!({"measure": a.measure, "poincare_alpha": poincare_alpha, "c2": c2_value, "box_a": a.box_a, "box_b": a.box_b}),
            );
            doc.reports = vec![experiments::verify_isoperimetric(&cfg)?];
            finish(doc, &cli.out, &cli.format)
        }
        Command::VerifyPoincareDp(a) => {
            let poincare_constant = match a.poincare_constant {
                Some(c) => c,
                None => {
                    let spec = heavytail_core::params::Spec::parse(&a.measure)?;
                    if spec.name == "laplace" {
                        let rate = spec.f64("rate")?;
                        4.0 / (rate * rate)
                    } else {
                        return Err(Error::config(
                            "pass --poincare-constant for measures other than laplace",
                        ));
                    }
                }
            };
            let cfg = experiments::SharpPoincareConfig {
                measure: a.measure.clone(),
                poincare_constant,
                p: a.p,
                dims: a.dims.clone(),
                samples: a.samples - a.samples % a.batches,
                seed,
                batches: a.batches,
                slope_tol: a.slope_tol,
            };
            let mut doc = ReportDocument::new(
                "verify-poincare-dp",
                seed,
                json!({"measure": a.measure, "p": a.p, "poincare_constant": poincare_constant, "dims": a.dims}),
            );
            doc.reports = experiments::verify_sharp_poincare_dp(&cfg)?;
            finish(doc, &cli.out, &cli.format)
        }
        Command::VerifyMatrix(a) => {
            let cfg = experiments::RandomMatrixConfig {
                lambda: a.lambda,
                n: a.n,
                trials: a.trials - a.trials % a.batches,
                seed,
                eigen_index: a.eigen_index,
                batches: a.batches,
            };
            let mut doc = ReportDocument::new(
                "verify-matrix",
                seed,
                json!({"lambda": a.lambda, "n": a.n, "trials": cfg.trials, "eigen_index": a.eigen_index}),
            );
            doc.reports = experiments::verify_random_matrix(&cfg)?;
            finish(doc, &cli.out, &cli.format)
        }
        Command::Tightness(a) => {
            let mut cfg = experiments::TightnessConfig::new(a.alpha, a.ms.clone());
            cfg.alpha1 = a.alpha1;
            cfg.alpha2 = a.alpha2;
            let rep = experiments::tightness_report(&cfg)?;
            println!(
                "variance slope {} (expected {}), gradient slope {} (expected {})",
                rep.var_slope, rep.var_slope_expected, rep.grad_slope, rep.grad_slope_expected
            );
            for row in &rep.rows {
                println!(
                    "  m={:<8} mean={:<12.6e} var={:<12.6e} grad_moment={:.6e}",
                    row.m, row.mean, row.variance, row.grad_moment
                );
            }
            let mut doc = ReportDocument::new(
                "tightness",
                seed,
                json!({"alpha": a.alpha, "ms": a.ms, "alpha1": a.alpha1, "alpha2": a.alpha2}),
            );
            doc.reports = rep.reports;
            finish(doc, &cli.out, &cli.format)
        }
        Command::Suite => {
            let results = suite::run_suite(seed)?;
            let mut doc = ReportDocument::new(
                "suite",
                seed,
                json!({"jobs": results.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>()}),
            );
            for (name, reports) in results {
                println!("== {name}");
                print_reports(&reports);
                for mut r in reports {
                    r.id = format!("{name}/{}", r.id);
                    doc.reports.push(r);
                }
            }
            let dir = out_dir(&cli.out);
            doc.write_files(&dir, "suite", parse_format(&cli.format)?)?;
            println!(
                "{} report rows written to {}/suite.*",
                doc.reports.len(),
                dir.display()
            );
            Ok(doc.exit_code())
        }
    }
}

fn run_constants(a: &ConstantsArgs, cli: &Cli) -> Result<i32> {
    let mut table: Vec<constants::BoundConstants> = Vec::new();
    if let Some(lambda) = a.lambda {
        table.push(constants::pareto_cheeger_certificate(lambda)?);
        if lambda > 3.0 {
            table.push(constants::pareto_product_constant(lambda)?);
            table.push(constants::pareto_product_constant_alt(lambda)?);
        }
    }
    if let Some(alpha) = a.alpha {
        let cheeger = a.cheeger.unwrap_or(1.0);
        if alpha > 0.5 && alpha < 1.0 {
            table.push(constants::mean_bound_constant(alpha, cheeger)?);
        }
        if alpha > 2.0 / 3.0 && alpha < 1.0 {
            table.push(constants::variance_bound_constant(alpha, cheeger)?);
        }
        if let Some(beta) = a.beta {
            table.push(constants::moment_bound_constant(alpha, beta, cheeger)?);
            let gamma = a.gamma.unwrap_or(1.0);
            table.push(constants::truncation_constant(alpha, beta, gamma, cheeger)?);
            for c in constants::auxiliary_constants(alpha, beta, gamma, cheeger)? {
                table.push(c);
            }
        }
    }
    if table.is_empty() {
        return Err(Error::config(
            "nothing to evaluate: pass --lambda and/or --alpha (with optional --beta, --gamma, --cheeger)",
        ));
    }
    for c in &table {
        println!("{:<14} = {:<22} [{}]", c.name, c.value, c.domain_note);
    }
    let dir = out_dir(&cli.out);
    std::fs::create_dir_all(&dir)
        .map_err(|e| Error::config(format!("cannot create {}: {e}", dir.display())))?;
    let format = parse_format(&cli.format)?;
    if format != OutputFormat::Csv {
        let mut body = serde_json::to_string_pretty(&table).expect("serializable table");
        body.push('\n');
        std::fs::write(dir.join("constants.json"), body)
            .map_err(|e| Error::config(format!("write failed: {e}")))?;
    }
    if format != OutputFormat::Json {
        let mut csv = String::from("name,value,domain_note,alpha,beta,gamma,cheeger,lambda\n");
        for c in &table {
            let f = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            csv.push_str(&format!(
                "{},{},\"{}\",{},{},{},{},{}\n",
                c.name,
                c.value,
                c.domain_note,
                f(c.inputs.alpha),
                f(c.inputs.beta),
                f(c.inputs.gamma),
                f(c.inputs.cheeger),
                f(c.inputs.lambda)
            ));
        }
        std::fs::write(dir.join("constants.csv"), csv)
            .map_err(|e| Error::config(format!("write failed: {e}")))?;
    }
    println!("table written to {}/constants.*", dir.display());
    Ok(0)
}
