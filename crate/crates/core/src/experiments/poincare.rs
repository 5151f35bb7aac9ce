use super::{build_function, build_measure};
use crate::error::{Error, Result};
use crate::montecarlo::{estimate_partial_moments, estimate_variance, scaling_fit, EstimationPlan};
use crate::report::{BoundReport, Relation};
use serde_json::json;

/// Sharpness check of the d_p variance bound under a classical Poincare
/// constant: the scaled sum has `Var = n^{(2-p)/p} Var(x)` exactly, so each
/// dimension is tested both for equality with that value (two-sided CI
/// containment) and against the upper bound
/// `C_P n^{(2-p)/p} (sum_i E|d_i f|^{p/(p-1)})^{2(p-1)/p}`, plus a slope fit.
#[derive(Debug, Clone)]
pub struct SharpPoincareConfig {
    pub measure: String,
    /// Classical Poincare constant of the 1-D measure (4/rate^2 for the
    /// two-sided exponential).
    pub poincare_constant: f64,
    pub p: f64,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub batches: usize,
    pub slope_tol: f64,
}

pub fn verify_sharp_poincare_dp(cfg: &SharpPoincareConfig) -> Result<Vec<BoundReport>> {
    if !(cfg.p > 1.0 && cfg.p <= 2.0) {
        return Err(Error::domain(format!(
            "sharp d_p check requires 1 < p <= 2 (got {})",
            cfg.p
        )));
    }
    if !(cfg.poincare_constant > 0.0) {
        return Err(Error::domain(
            "sharp d_p check requires a positive Poincare constant",
        ));
    }
    if cfg.dims.is_empty() {
        return Err(Error::config("need at least one dimension"));
    }
    let measure = build_measure(&cfg.measure)?;
    let base_variance = measure
        .moments()
        .filter(|m| m.variance.is_finite())
        .ok_or_else(|| {
            Error::domain("sharp d_p check needs a measure with finite analytic variance")
        })?
        .variance;

    let growth = (2.0 - cfg.p) / cfg.p; // = 1 - 2(p-1)/p
    let dual = cfg.p / (cfg.p - 1.0);
    let mut reports = Vec::new();
    let mut variances = Vec::new();

    for &n in &cfg.dims {
        let function = build_function(&format!("scaled_sum:p={}", cfg.p), n)?;
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

        let exact = (n as f64).powf(growth) * base_variance;
        reports.push(
            BoundReport::new(
                format!("sharp-dp-equality[n={n}]"),
                Relation::Equality,
                est.variance,
                (est.ci_low, est.ci_high),
                exact,
                json!({
                    "measure": cfg.measure,
                    "p": cfg.p,
                    "n": n,
                    "base_variance": base_variance,
                    "batch_median_variance": est.batch_median,
                }),
            )
            .with_seed(plan.seed)
            .with_samples(cfg.samples as u64),
        );

        let partials = estimate_partial_moments(&plan, dual)?;
        let dual_sum: f64 = partials.iter().sum();
        let rhs = cfg.poincare_constant
            * (n as f64).powf(growth)
            * dual_sum.powf(2.0 * (cfg.p - 1.0) / cfg.p);
        reports.push(
            BoundReport::new(
                format!("sharp-dp-bound[n={n}]"),
                Relation::UpperBound,
                est.variance,
                (est.ci_low, est.ci_high),
                rhs,
                json!({
                    "measure": cfg.measure,
                    "p": cfg.p,
                    "n": n,
                    "poincare_constant": cfg.poincare_constant,
                    "dual_moment_sum": dual_sum,
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
                "sharp-dp-slope",
                Relation::UpperBound,
                (fit.slope - growth).abs(),
                cfg.slope_tol,
                json!({
                    "p": cfg.p,
                    "slope": fit.slope,
                    "expected": growth,
                    "r_squared": fit.r_squared,
                }),
            )
            .with_seed(cfg.seed),
        );
    }

    Ok(reports)
}
