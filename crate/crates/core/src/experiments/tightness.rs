use crate::error::{Error, Result};
use crate::montecarlo::scaling_fit;
use crate::quad;
use crate::report::{BoundReport, Relation};
use serde_json::json;

/// Closed-form moment asymptotics of the ramp family f_m(x) = (x - m)+
/// under the power law with lambda = 1/(1-alpha), demonstrating that the
/// variance and first-moment bounds cannot hold with any larger exponent.
#[derive(Debug, Clone)]
pub struct TightnessConfig {
    /// alpha in (2/3, 1); the ambient law is mu_{1/(1-alpha)}.
    pub alpha: f64,
    pub ms: Vec<f64>,
    /// Exponent above (3 alpha - 2)/alpha whose variance ratio must diverge.
    pub alpha1: Option<f64>,
    /// Exponent above (2 alpha - 1)/alpha whose first-moment ratio must diverge.
    pub alpha2: Option<f64>,
    /// Allowed relative error of the fitted slopes.
    pub slope_rel_tol: f64,
}

impl TightnessConfig {
    pub fn new(alpha: f64, ms: Vec<f64>) -> TightnessConfig {
        TightnessConfig {
            alpha,
            ms,
            alpha1: None,
            alpha2: None,
            slope_rel_tol: 0.01,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TightnessRow {
    pub m: f64,
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
    /// E|f'_m|^q = P(X >= m), independent of q.
    pub grad_moment: f64,
}

#[derive(Debug, Clone)]
pub struct TightnessReport {
    pub rows: Vec<TightnessRow>,
    pub var_slope: f64,
    pub var_slope_expected: f64,
    pub grad_slope: f64,
    pub grad_slope_expected: f64,
    pub reports: Vec<BoundReport>,
}

/// Closed forms for E[(X-m)+^k] under density (L-1) x^{-L} on [1, inf):
/// mean m^{2-L}/(L-2), second moment 2 m^{3-L}/((L-3)(L-2)).
fn closed_forms(lambda: f64, m: f64) -> TightnessRow {
    let mean = m.powf(2.0 - lambda) / (lambda - 2.0);
    let second = 2.0 * m.powf(3.0 - lambda) / ((lambda - 3.0) * (lambda - 2.0));
    TightnessRow {
        m,
        mean,
        second_moment: second,
        variance: second - mean * mean,
        grad_moment: m.powf(1.0 - lambda),
    }
}

pub fn tightness_report(cfg: &TightnessConfig) -> Result<TightnessReport> {
    if !(cfg.alpha > 2.0 / 3.0 && cfg.alpha < 1.0) {
        return Err(Error::domain(format!(
            "tightness analysis requires 2/3 < alpha < 1 so that lambda = 1/(1-alpha) > 3 (got {})",
            cfg.alpha
        )));
    }
    if cfg.ms.len() < 4 {
        return Err(Error::config("need at least 4 ramp thresholds"));
    }
    if cfg.ms.windows(2).any(|w| w[0] >= w[1]) || cfg.ms[0] < 2.0 {
        return Err(Error::config(
            "ramp thresholds must be increasing and >= 2 (so the median of f_m is 0)",
        ));
    }
    let lambda = 1.0 / (1.0 - cfg.alpha);
    let var_expo = (3.0 * cfg.alpha - 2.0) / cfg.alpha;
    let mean_expo = (2.0 * cfg.alpha - 1.0) / cfg.alpha;
    let alpha1 = cfg.alpha1.unwrap_or(var_expo + 0.1);
    let alpha2 = cfg.alpha2.unwrap_or(mean_expo + 0.05);
    if alpha1 <= var_expo {
        return Err(Error::domain(format!(
            "alpha1 must exceed (3 alpha - 2)/alpha = {var_expo} (got {alpha1})"
        )));
    }
    if alpha2 <= mean_expo {
        return Err(Error::domain(format!(
            "alpha2 must exceed (2 alpha - 1)/alpha = {mean_expo} (got {alpha2})"
        )));
    }

    let rows: Vec<TightnessRow> = cfg.ms.iter().map(|&m| closed_forms(lambda, m)).collect();

    // quadrature cross-check of the closed forms
    let density = move |x: f64| (lambda - 1.0) * x.powf(-lambda);
    let mut worst_quad = 0.0f64;
    for row in &rows {
        let m = row.m;
        let mean_q = quad::integrate(|x| (x - m) * density(x), m, f64::INFINITY, 1e-12)?;
        let second_q =
            quad::integrate(|x| (x - m) * (x - m) * density(x), m, f64::INFINITY, 1e-12)?;
        let grad_q = quad::integrate(density, m, f64::INFINITY, 1e-12)?;
        worst_quad = worst_quad
            .max((mean_q - row.mean).abs())
            .max((second_q - row.second_moment).abs())
            .max((grad_q - row.grad_moment).abs());
    }

    let variances: Vec<f64> = rows.iter().map(|r| r.variance).collect();
    let grads: Vec<f64> = rows.iter().map(|r| r.grad_moment).collect();
    let var_fit = scaling_fit(&cfg.ms, &variances)?;
    let grad_fit = scaling_fit(&cfg.ms, &grads)?;
    // expected slopes in m: variance ~ m^{-(3a-2)/(1-a)}, gradient moment
    // ~ m^{-a/(1-a)}
    let var_slope_expected = -(3.0 * cfg.alpha - 2.0) / (1.0 - cfg.alpha);
    let grad_slope_expected = -cfg.alpha / (1.0 - cfg.alpha);

    // ratio sequences that must increase without bound on the grid
    let ratio1: Vec<f64> = rows
        .iter()
        .map(|r| r.variance / r.grad_moment.powf(alpha1))
        .collect();
    let ratio2: Vec<f64> = rows
        .iter()
        .map(|r| r.mean / r.grad_moment.powf(alpha2))
        .collect();
    let min_step1 = ratio1
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let min_step2 = ratio2
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);

    let base = json!({
        "alpha": cfg.alpha,
        "lambda": lambda,
        "ms": cfg.ms,
        "alpha1": alpha1,
        "alpha2": alpha2,
    });
    let reports = vec![
        BoundReport::exact(
            "tightness-quadrature-agreement",
            Relation::UpperBound,
            worst_quad,
            1e-9,
            base.clone(),
        ),
        BoundReport::exact(
            "tightness-variance-slope",
            Relation::UpperBound,
            (var_fit.slope - var_slope_expected).abs(),
            cfg.slope_rel_tol * var_slope_expected.abs(),
            json!({"slope": var_fit.slope, "expected": var_slope_expected, "r_squared": var_fit.r_squared}),
        ),
        BoundReport::exact(
            "tightness-gradient-slope",
            Relation::UpperBound,
            (grad_fit.slope - grad_slope_expected).abs(),
            cfg.slope_rel_tol * grad_slope_expected.abs(),
            json!({"slope": grad_fit.slope, "expected": grad_slope_expected, "r_squared": grad_fit.r_squared}),
        ),
        BoundReport::exact(
            "tightness-variance-ratio-diverges",
            Relation::LowerBound,
            min_step1,
            0.0,
            json!({"alpha1": alpha1, "ratios": ratio1}),
        ),
        BoundReport::exact(
            "tightness-mean-ratio-diverges",
            Relation::LowerBound,
            min_step2,
            0.0,
            json!({"alpha2": alpha2, "ratios": ratio2}),
        ),
    ];

    Ok(TightnessReport {
        rows,
        var_slope: var_fit.slope,
        var_slope_expected,
        grad_slope: grad_fit.slope,
        grad_slope_expected,
        reports,
    })
}
