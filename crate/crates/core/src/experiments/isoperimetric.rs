use super::build_measure;
use crate::error::{Error, Result};
use crate::report::{BoundReport, Relation};
use serde_json::json;

/// Distance-vs-measure check for two axis-aligned boxes under the product
/// measure: `d(A, B) <= n^{(1-alpha)/2} sqrt(C / (mu^n(A) mu^n(B)))`.
/// Everything is exact: box measures come from 1-D cdf products and the
/// gap distance from coordinate-wise interval gaps.
#[derive(Debug, Clone)]
pub struct IsoperimetricConfig {
    pub measure: String,
    /// Exponent of the certified variance-Poincare inequality.
    pub poincare_alpha: f64,
    pub c2_value: f64,
    /// Per-coordinate (lo, hi) intervals; lengths must agree.
    pub box_a: Vec<(f64, f64)>,
    pub box_b: Vec<(f64, f64)>,
}

pub fn verify_isoperimetric(cfg: &IsoperimetricConfig) -> Result<BoundReport> {
    if cfg.box_a.is_empty() || cfg.box_a.len() != cfg.box_b.len() {
        return Err(Error::config(
            "boxes must be nonempty and share one dimension",
        ));
    }
    if !(cfg.c2_value > 0.0) {
        return Err(Error::domain(
            "isoperimetric bound requires a positive certificate value",
        ));
    }
    let n = cfg.box_a.len();
    let measure = build_measure(&cfg.measure)?;

    let box_mass = |b: &[(f64, f64)]| -> f64 {
        b.iter()
            .map(|&(lo, hi)| measure.cdf(hi) - measure.cdf(lo))
            .product()
    };
    let mass_a = box_mass(&cfg.box_a);
    let mass_b = box_mass(&cfg.box_b);
    if !(mass_a > 0.0) || !(mass_b > 0.0) {
        return Err(Error::domain(format!(
            "both boxes need positive product measure (got {mass_a}, {mass_b})"
        )));
    }

    let gap_sq: f64 = cfg
        .box_a
        .iter()
        .zip(&cfg.box_b)
        .map(|(&(alo, ahi), &(blo, bhi))| {
            let g = (blo - ahi).max(alo - bhi).max(0.0);
            g * g
        })
        .sum();
    let distance = gap_sq.sqrt();

    let rhs = (n as f64).powf(0.5 * (1.0 - cfg.poincare_alpha))
        * (cfg.c2_value / (mass_a * mass_b)).sqrt();

    Ok(BoundReport::exact(
        format!("isoperimetric[n={n}]"),
        Relation::UpperBound,
        distance,
        rhs,
        json!({
            "measure": cfg.measure,
            "poincare_alpha": cfg.poincare_alpha,
            "certificate": cfg.c2_value,
            "mass_a": mass_a,
            "mass_b": mass_b,
            "box_a": cfg.box_a,
            "box_b": cfg.box_b,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants;
    use crate::measure::{Measure1d, Pareto};
    use crate::report::Verdict;

    fn pareto_cert() -> (f64, f64) {
        let i = constants::pareto_cheeger_certificate(5.0).unwrap().value;
        let c2 = constants::variance_bound_constant(0.8, i).unwrap().value;
        (0.5, c2)
    }

    #[test]
    fn identical_boxes_have_zero_distance() {
        let (alpha, c2) = pareto_cert();
        let cfg = IsoperimetricConfig {
            measure: "pareto:lambda=5".into(),
            poincare_alpha: alpha,
            c2_value: c2,
            box_a: vec![(1.0, 2.0), (1.0, 2.0)],
            box_b: vec![(1.0, 2.0), (1.0, 2.0)],
        };
        let r = verify_isoperimetric(&cfg).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn two_dimensional_power_law_boxes() {
        let (alpha, c2) = pareto_cert();
        let cfg = IsoperimetricConfig {
            measure: "pareto:lambda=5".into(),
            poincare_alpha: alpha,
            c2_value: c2,
            box_a: vec![(1.0, 1.2), (1.0, 1.2)],
            box_b: vec![(3.0, 5.0), (3.0, 5.0)],
        };
        let r = verify_isoperimetric(&cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "slack {}", r.slack);
        // exact gap distance: sqrt(2) * 1.8
        assert!((r.lhs - 2f64.sqrt() * 1.8).abs() < 1e-12);
    }

    #[test]
    fn one_dimensional_quartile_construction() {
        let (alpha, c2) = pareto_cert();
        let m = Pareto::new(5.0).unwrap();
        let cfg = IsoperimetricConfig {
            measure: "pareto:lambda=5".into(),
            poincare_alpha: alpha,
            c2_value: c2,
            box_a: vec![(1.0, m.quantile(0.25))],
            box_b: vec![(m.quantile(0.75), f64::INFINITY)],
        };
        let r = verify_isoperimetric(&cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "slack {}", r.slack);
        let mass = r.config["mass_a"].as_f64().unwrap();
        assert!((mass - 0.25).abs() < 1e-12);
    }

    #[test]
    fn zero_measure_box_is_rejected() {
        let (alpha, c2) = pareto_cert();
        let cfg = IsoperimetricConfig {
            measure: "pareto:lambda=5".into(),
            poincare_alpha: alpha,
            c2_value: c2,
            box_a: vec![(0.2, 0.8)], // below the support
            box_b: vec![(3.0, 5.0)],
        };
        assert!(verify_isoperimetric(&cfg).is_err());
    }
}
