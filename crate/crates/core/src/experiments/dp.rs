use super::{build_function, build_measure, metric_covers};
use crate::error::{Error, Result};
use crate::montecarlo::{estimate_partial_moments, estimate_variance, EstimationPlan};
use crate::report::{BoundReport, Relation};
use serde_json::json;

/// Which Poincare-type certificate backs the d_p variance bound.
#[derive(Debug, Clone, Copy)]
pub enum DpCertificate {
    /// A second-moment/first-gradient certificate: valid for 1 < p <= inf,
    /// exponent `alpha (p-1)/p`.
    MomentL1 { alpha: f64, value: f64 },
    /// A variance certificate: valid for 1 < p <= 2, exponent
    /// `2 alpha (p-1)/p`.
    VarianceL2 { alpha: f64, value: f64 },
}

#[derive(Debug, Clone)]
pub struct DpTheoremConfig {
    pub measure: String,
    /// The metric exponent; `f64::INFINITY` selects the sup metric.
    pub p: f64,
    pub certificate: DpCertificate,
    pub function: String,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub batches: usize,
}

/// Checks `Var(f) <= C n^{1 - e} (sum_i E|d_i f|^{p/(p-1)})^{e}` with
/// `e = alpha (p-1)/p` (first certificate) or `e = 2 alpha (p-1)/p`
/// (variance certificate, p <= 2 only) for a d_p-1-Lipschitz `f`.
pub fn verify_dp_theorem(cfg: &DpTheoremConfig) -> Result<BoundReport> {
    let (alpha, cert_value, exponent_factor, kind) = match cfg.certificate {
        DpCertificate::MomentL1 { alpha, value } => {
            if !(cfg.p > 1.0) {
                return Err(Error::domain(format!(
                    "d_p bound (first certificate) requires 1 < p <= inf (got {})",
                    cfg.p
                )));
            }
            (alpha, value, 1.0, "moment_l1")
        }
        DpCertificate::VarianceL2 { alpha, value } => {
            if !(cfg.p > 1.0 && cfg.p <= 2.0) {
                return Err(Error::domain(format!(
                    "d_p bound (variance certificate) requires 1 < p <= 2 (got {})",
                    cfg.p
                )));
            }
            (alpha, value, 2.0, "variance_l2")
        }
    };
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!(
            "d_p bound requires 0 < alpha <= 1 (got {alpha})"
        )));
    }
    if !(cert_value > 0.0) {
        return Err(Error::domain("d_p bound requires a positive certificate"));
    }

    let measure = build_measure(&cfg.measure)?;
    let function = build_function(&cfg.function, cfg.n)?;
    if !metric_covers(function.metric().p(), cfg.p) {
        return Err(Error::domain(format!(
            "metric mismatch: {} is declared for d_{} but the bound is stated for d_{}",
            function.name(),
            function.metric().p(),
            cfg.p
        )));
    }

    // dual exponent p/(p-1); 1 at p = inf
    let dual = if cfg.p.is_infinite() {
        1.0
    } else {
        cfg.p / (cfg.p - 1.0)
    };
    let pratio = if cfg.p.is_infinite() {
        1.0
    } else {
        (cfg.p - 1.0) / cfg.p
    };
    let e = exponent_factor * alpha * pratio;

    let plan = EstimationPlan::new(
        measure,
        cfg.n,
        function.clone(),
        cfg.samples,
        cfg.seed,
        cfg.batches,
    )?;
    let var = estimate_variance(&plan)?;
    let partials = estimate_partial_moments(&plan, dual)?;
    let partial_sum: f64 = partials.iter().sum();
    let rhs = cert_value * (cfg.n as f64).powf(1.0 - e) * partial_sum.powf(e);

    Ok(BoundReport::new(
        format!("dp-variance[p={},n={}]", cfg.p, cfg.n),
        Relation::UpperBound,
        var.variance,
        (var.ci_low, var.ci_high),
        rhs,
        json!({
            "measure": cfg.measure,
            "function": function.name(),
            "p": if cfg.p.is_infinite() { serde_json::Value::String("inf".into()) } else { json!(cfg.p) },
            "certificate_kind": kind,
            "certificate_alpha": alpha,
            "certificate": cert_value,
            "dual_moment_sum": partial_sum,
            "exponent": e,
            "batch_median_variance": var.batch_median,
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

    fn pareto_cert_l1() -> DpCertificate {
        // first-moment certificate from the moment bound constant at
        // beta=2: valid exponent is 3a'-2 = 0.4 at a' = 0.8
        let i = constants::pareto_cheeger_certificate(5.0).unwrap().value;
        let c1 = constants::moment_bound_constant(0.8, 2.0, i).unwrap().value;
        DpCertificate::MomentL1 {
            alpha: 0.4,
            value: c1,
        }
    }

    #[test]
    fn scaled_sum_at_p_three_halves_passes() {
        let cfg = DpTheoremConfig {
            measure: "pareto:lambda=5".into(),
            p: 1.5,
            certificate: pareto_cert_l1(),
            function: "scaled_sum:p=1.5".into(),
            n: 16,
            samples: 40_000,
            seed: 5,
            batches: 32,
        };
        let r = verify_dp_theorem(&cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "slack {}", r.slack);
        // constant gradient: the dual moment sum is exactly 1
        let s = r.config["dual_moment_sum"].as_f64().unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sup_metric_branch_with_max() {
        let cfg = DpTheoremConfig {
            measure: "pareto:lambda=5".into(),
            p: f64::INFINITY,
            certificate: pareto_cert_l1(),
            function: "max".into(),
            n: 16,
            samples: 40_000,
            seed: 6,
            batches: 32,
        };
        let r = verify_dp_theorem(&cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "slack {}", r.slack);
        let s = r.config["dual_moment_sum"].as_f64().unwrap();
        assert!((s - 1.0).abs() < 1e-12, "indicator gradients sum to 1");
    }

    #[test]
    fn variance_certificate_rejects_p_above_two() {
        let cfg = DpTheoremConfig {
            measure: "pareto:lambda=5".into(),
            p: 3.0,
            certificate: DpCertificate::VarianceL2 {
                alpha: 0.5,
                value: 64.0,
            },
            function: "max".into(),
            n: 4,
            samples: 640,
            seed: 1,
            batches: 32,
        };
        assert!(verify_dp_theorem(&cfg).is_err());
    }

    #[test]
    fn metric_mismatch_is_rejected() {
        // scaled_sum declared for d_1.5 cannot be used at p = 2
        let cfg = DpTheoremConfig {
            measure: "pareto:lambda=5".into(),
            p: 2.0,
            certificate: pareto_cert_l1(),
            function: "scaled_sum:p=1.5".into(),
            n: 4,
            samples: 640,
            seed: 1,
            batches: 32,
        };
        assert!(verify_dp_theorem(&cfg).is_err());
    }
}
