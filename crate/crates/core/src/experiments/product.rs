use super::{build_function, build_measure, metric_covers};
use crate::error::{Error, Result};
use crate::montecarlo::{estimate_gradient_moment, estimate_variance, EstimationPlan};
use crate::report::{BoundReport, Relation};
use serde_json::json;

/// Checks `Var(f) <= C * n^{1-alpha} * (E|grad f|^2)^alpha` under the
/// product measure, for a certified variance-Poincare value `C` at
/// exponent `alpha`.
#[derive(Debug, Clone)]
pub struct ProductTheoremConfig {
    pub measure: String,
    /// Exponent of the certified variance-Poincare inequality.
    pub poincare_alpha: f64,
    /// The certificate value (e.g. the variance bound constant evaluated
    /// at the measure's Cheeger certificate).
    pub c2_value: f64,
    pub function: String,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub batches: usize,
}

pub fn verify_product_theorem(cfg: &ProductTheoremConfig) -> Result<BoundReport> {
    if !(cfg.poincare_alpha > 0.0 && cfg.poincare_alpha < 1.0) {
        return Err(Error::domain(format!(
            "product bound requires 0 < alpha < 1 (got {})",
            cfg.poincare_alpha
        )));
    }
    if !(cfg.c2_value > 0.0) {
        return Err(Error::domain(
            "product bound requires a positive certificate value",
        ));
    }
    let measure = build_measure(&cfg.measure)?;
    let function = build_function(&cfg.function, cfg.n)?;
    if !metric_covers(function.metric().p(), 2.0) {
        return Err(Error::domain(format!(
            "product bound needs a Euclidean 1-Lipschitz function; {} is declared for d_{}",
            function.name(),
            function.metric().p()
        )));
    }
    let plan = EstimationPlan::new(
        measure,
        cfg.n,
        function.clone(),
        cfg.samples,
        cfg.seed,
        cfg.batches,
    )?;
    let var = estimate_variance(&plan)?;
    let grad = estimate_gradient_moment(&plan, 2.0)?;
    let rhs = cfg.c2_value
        * (cfg.n as f64).powf(1.0 - cfg.poincare_alpha)
        * grad.mean.powf(cfg.poincare_alpha);
    Ok(BoundReport::new(
        format!("product-variance[n={}]", cfg.n),
        Relation::UpperBound,
        var.variance,
        (var.ci_low, var.ci_high),
        rhs,
        json!({
            "measure": cfg.measure,
            "function": function.name(),
            "poincare_alpha": cfg.poincare_alpha,
            "certificate": cfg.c2_value,
            "grad_moment": grad.mean,
            "grad_ci": [grad.ci_low, grad.ci_high],
            "batch_median_variance": var.batch_median,
            "n": cfg.n,
        }),
    )
    .with_seed(cfg.seed)
    .with_samples(cfg.samples as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants;
    use crate::report::Verdict;

    fn base(n: usize, fun: &str) -> ProductTheoremConfig {
        // pipeline: certificate at alpha' = 0.8 for the lambda=5 power law,
        // giving the variance-Poincare exponent (3a'-2)/a' = 0.5
        let i = constants::pareto_cheeger_certificate(5.0).unwrap().value;
        let c2 = constants::variance_bound_constant(0.8, i).unwrap().value;
        ProductTheoremConfig {
            measure: "pareto:lambda=5".into(),
            poincare_alpha: 0.5,
            c2_value: c2,
            function: fun.into(),
            n,
            samples: 40_000,
            seed: 21,
            batches: 32,
        }
    }

    #[test]
    fn max_under_product_power_law_passes() {
        let r = verify_product_theorem(&base(64, "max")).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "slack {}", r.slack);
    }

    #[test]
    fn one_dimensional_base_case() {
        let r = verify_product_theorem(&base(1, "identity")).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn constant_function_trivially_passes() {
        let mut cfg = base(2, "linear:w=0/0");
        cfg.samples = 6_400;
        let r = verify_product_theorem(&cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.lhs, 0.0);
    }

    #[test]
    fn non_euclidean_function_is_rejected() {
        let cfg = ProductTheoremConfig {
            function: "scaled_sum:p=1.5".into(),
            ..base(16, "max")
        };
        assert!(verify_product_theorem(&cfg).is_err());
    }

    #[test]
    fn missing_certificate_is_rejected() {
        let mut cfg = base(4, "max");
        cfg.c2_value = 0.0;
        assert!(verify_product_theorem(&cfg).is_err());
    }
}
