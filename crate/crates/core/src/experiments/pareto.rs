use super::{build_function, build_measure, metric_covers};
use crate::constants;
use crate::error::{Error, Result};
use crate::montecarlo::{estimate_variance, scaling_fit, EstimationPlan};
use crate::report::{BoundReport, Relation};
use serde_json::json;

/// Desk-scale check of the power-law product bound: for each dimension n,
/// `Var(f) <= C(lambda) n^{2/(lambda-1)}` under mu_lambda^n, plus a log-log
/// fit of the measured variances against the predicted exponent.
#[derive(Debug, Clone)]
pub struct ParetoTheoremConfig {
    pub lambda: f64,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub batches: usize,
    /// Euclidean 1-Lipschitz test function; the maximum is the near-extremal
    /// default.
    pub function: String,
    /// Allowed deviation of the fitted slope from 2/(lambda-1).
    pub slope_tol: f64,
}

impl ParetoTheoremConfig {
    pub fn new(lambda: f64, dims: Vec<usize>, samples: usize, seed: u64) -> ParetoTheoremConfig {
        ParetoTheoremConfig {
            lambda,
            dims,
            samples,
            seed,
            batches: 32,
            function: "max".into(),
            slope_tol: 0.1,
        }
    }
}

pub fn verify_pareto_theorem(cfg: &ParetoTheoremConfig) -> Result<Vec<BoundReport>> {
    if !(cfg.lambda > 3.0) {
        return Err(Error::domain(format!(
            "power-law product bound requires lambda > 3 (got {})",
            cfg.lambda
        )));
    }
    if cfg.dims.is_empty() {
        return Err(Error::config("need at least one dimension"));
    }
    let c_lambda = constants::pareto_product_constant(cfg.lambda)?.value;
    let exponent = 2.0 / (cfg.lambda - 1.0);
    let measure = build_measure(&format!("pareto:lambda={}", cfg.lambda))?;

    let mut reports = Vec::new();
    let mut variances = Vec::new();
    for &n in &cfg.dims {
        let function = build_function(&cfg.function, n)?;
        if !metric_covers(function.metric().p(), 2.0) {
            return Err(Error::domain(format!(
                "{} is not declared Euclidean 1-Lipschitz",
                function.name()
            )));
        }
        let plan = EstimationPlan::new(
            measure.clone(),
            n,
            function,
            cfg.samples,
            cfg.seed.wrapping_add(n as u64),
            cfg.batches,
        )?;
        let est = estimate_variance(&plan)?;
        variances.push(est.variance);
        let rhs = c_lambda * (n as f64).powf(exponent);
        reports.push(
            BoundReport::new(
                format!("pareto-variance[n={n}]"),
                Relation::UpperBound,
                est.variance,
                (est.ci_low, est.ci_high),
                rhs,
                json!({
                    "lambda": cfg.lambda,
                    "n": n,
                    "function": cfg.function,
                    "c_lambda": c_lambda,
                    "exponent": exponent,
                    "batch_median_variance": est.batch_median,
                }),
            )
            .with_seed(plan.seed)
            .with_samples(cfg.samples as u64),
        );
    }

    if cfg.dims.len() >= 4 {
        let xs: Vec<f64> = cfg.dims.iter().map(|&n| n as f64).collect();
        let fit = scaling_fit(&xs, &variances)?;
        reports.push(
            BoundReport::exact(
                "pareto-scaling-slope",
                Relation::UpperBound,
                (fit.slope - exponent).abs(),
                cfg.slope_tol,
                json!({
                    "lambda": cfg.lambda,
                    "slope": fit.slope,
                    "expected": exponent,
                    "r_squared": fit.r_squared,
                    "dims": cfg.dims,
                }),
            )
            .with_seed(cfg.seed)
            .with_samples(cfg.samples as u64),
        );
    }

    Ok(reports)
}
