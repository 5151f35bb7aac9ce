//! Quantile-representation machinery: empirical quantiles, the derivative
//! bound, the tail (FTC) bound, the truncation inequality, the majorant
//! G_gamma, the half-mass point, and the tail-moment lower bound.
//!
//! Every check here operates on the quantile representation: the quantile
//! function pushed forward by the uniform law has the law of f, which
//! reduces each inequality to a 1-D integral.

use crate::constants;
use crate::error::{Error, Result};
use crate::measure::Measure1d;
use crate::quad;
use crate::report::{BoundReport, Relation};
use serde_json::json;
use std::sync::Arc;

type QuantileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

enum Source {
    /// Exact quantile function, evaluable anywhere in (0,1).
    Analytic(QuantileFn),
    /// Sorted sample; quantiles are order statistics at ranks ceil(pN)
    /// with midpoint interpolation where pN is integral.
    Sample { sorted: Vec<f64>, shift: f64 },
}

/// A quantile function tabulated on a strictly increasing grid in (0,1),
/// backed either by an analytic formula or by order statistics.
pub struct EmpiricalQuantile {
    grid: Vec<f64>,
    values: Vec<f64>,
    centered: bool,
    source: Source,
}

impl EmpiricalQuantile {
    /// Quantile of the identity function under `measure`, optionally
    /// median-centered, tabulated at p = i/points.
    pub fn from_measure(
        measure: Arc<dyn Measure1d>,
        points: usize,
        centered: bool,
    ) -> Result<EmpiricalQuantile> {
        let shift = if centered { measure.median() } else { 0.0 };
        let f: QuantileFn = Arc::new(move |p| measure.quantile(p) - shift);
        Self::from_quantile_fn(f, points, centered)
    }

    /// Quantile of `g(X)` for a nondecreasing `g` under `measure`
    /// (Q_{g(X)} = g o Q_X); centering subtracts g(median).
    pub fn from_monotone_fn(
        measure: Arc<dyn Measure1d>,
        g: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        points: usize,
        centered: bool,
    ) -> Result<EmpiricalQuantile> {
        let shift = if centered { g(measure.median()) } else { 0.0 };
        let f: QuantileFn = Arc::new(move |p| g(measure.quantile(p)) - shift);
        Self::from_quantile_fn(f, points, centered)
    }

    pub fn from_quantile_fn(
        f: QuantileFn,
        points: usize,
        centered: bool,
    ) -> Result<EmpiricalQuantile> {
        if points < 4 {
            return Err(Error::config("quantile grid needs at least 4 points"));
        }
        let grid: Vec<f64> = (1..points).map(|i| i as f64 / points as f64).collect();
        let values: Vec<f64> = grid.iter().map(|&p| f(p)).collect();
        for w in values.windows(2) {
            if w[1] < w[0] - 1e-12 * w[0].abs().max(1.0) {
                return Err(Error::numeric(
                    "quantile values are not nondecreasing along the grid",
                ));
            }
        }
        Ok(EmpiricalQuantile {
            grid,
            values,
            centered,
            source: Source::Analytic(f),
        })
    }

    /// Build from raw draws; sorts internally. With `centered` the
    /// empirical median (midpoint order statistic) is subtracted.
    pub fn from_sample(
        mut data: Vec<f64>,
        points: usize,
        centered: bool,
    ) -> Result<EmpiricalQuantile> {
        if data.len() < 2 {
            return Err(Error::config("sample quantile needs at least 2 values"));
        }
        if points < 4 {
            return Err(Error::config("quantile grid needs at least 4 points"));
        }
        data.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = data.len();
        let shift = if centered {
            if n.is_multiple_of(2) {
                0.5 * (data[n / 2 - 1] + data[n / 2])
            } else {
                data[n / 2]
            }
        } else {
            0.0
        };
        let source = Source::Sample {
            sorted: data,
            shift,
        };
        let grid: Vec<f64> = (1..points).map(|i| i as f64 / points as f64).collect();
        let values: Vec<f64> = grid.iter().map(|&p| source_eval(&source, p)).collect();
        Ok(EmpiricalQuantile {
            grid,
            values,
            centered,
            source,
        })
    }

    pub fn eval(&self, p: f64) -> f64 {
        match &self.source {
            Source::Analytic(f) => f(p),
            s @ Source::Sample { .. } => source_eval(s, p),
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    /// E|f|^beta computed in the quantile representation.
    pub fn integral_abs_pow(&self, beta: f64) -> Result<f64> {
        match &self.source {
            Source::Analytic(f) => {
                let f = f.clone();
                quad::integrate(move |x| f(x).abs().powf(beta), 0.0, 1.0, quad::DEFAULT_TOL)
            }
            Source::Sample { sorted, shift } => Ok(sorted
                .iter()
                .map(|v| (v - shift).abs().powf(beta))
                .sum::<f64>()
                / sorted.len() as f64),
        }
    }

    /// E|(f^gamma)_{[-1/2,1/2]}| with the signed power f^gamma =
    /// sign(f) |f|^gamma.
    pub fn integral_truncated_signpow(&self, gamma: f64) -> Result<f64> {
        let h = move |v: f64| clamp_half(signed_pow(v, gamma)).abs();
        match &self.source {
            Source::Analytic(f) => {
                let f = f.clone();
                quad::integrate(move |x| h(f(x)), 0.0, 1.0, quad::DEFAULT_TOL)
            }
            Source::Sample { sorted, shift } => {
                Ok(sorted.iter().map(|v| h(v - shift)).sum::<f64>() / sorted.len() as f64)
            }
        }
    }
}

fn source_eval(source: &Source, p: f64) -> f64 {
    match source {
        Source::Analytic(f) => f(p),
        Source::Sample { sorted, shift } => {
            let n = sorted.len();
            let h = p * n as f64;
            let k = h.ceil() as usize;
            let k = k.clamp(1, n);
            let exact_rank = (h - h.round()).abs() < 1e-9 * h.max(1.0);
            let v = if exact_rank && (h.round() as usize) < n && h.round() >= 1.0 {
                let r = h.round() as usize;
                0.5 * (sorted[r - 1] + sorted[r])
            } else {
                sorted[k - 1]
            };
            v - shift
        }
    }
}

fn signed_pow(v: f64, gamma: f64) -> f64 {
    v.signum() * v.abs().powf(gamma)
}

fn clamp_half(v: f64) -> f64 {
    v.clamp(-0.5, 0.5)
}

/// Clamp each value to [-1/2, 1/2], the truncation used throughout the
/// moment estimates. Idempotent and 1-Lipschitz coordinatewise.
pub fn truncate_half(values: &[f64]) -> Vec<f64> {
    values.iter().map(|&v| clamp_half(v)).collect()
}

/// Per-cell data of the derivative check.
#[derive(Debug, Clone)]
pub struct DerivativeCell {
    pub p_lo: f64,
    pub p_hi: f64,
    pub slope: f64,
    pub bound_mid: f64,
    /// Variation of the bound across the cell; the discretization slack.
    pub cell_slack: f64,
}

impl DerivativeCell {
    pub fn ratio(&self) -> f64 {
        self.slope / self.bound_mid
    }
}

fn derivative_bound(alpha: f64, cheeger: f64, p: f64) -> f64 {
    (cheeger / p.min(1.0 - p)).powf(1.0 / alpha)
}

/// Finite-difference slopes of the quantile against the pointwise bound
/// `(I / min{x, 1-x})^{1/alpha}`.
pub fn derivative_cells(
    q: &EmpiricalQuantile,
    alpha: f64,
    cheeger: f64,
) -> Result<Vec<DerivativeCell>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!(
            "derivative bound requires 0 < alpha <= 1 (got {alpha})"
        )));
    }
    if q.grid.len() < 65 {
        return Err(Error::domain(format!(
            "derivative check requires at least 64 grid cells (got {})",
            q.grid.len().saturating_sub(1)
        )));
    }
    let mut cells = Vec::with_capacity(q.grid.len() - 1);
    for i in 0..q.grid.len() - 1 {
        let (p0, p1) = (q.grid[i], q.grid[i + 1]);
        let slope = (q.values[i + 1] - q.values[i]) / (p1 - p0);
        let mid = 0.5 * (p0 + p1);
        let bound_mid = derivative_bound(alpha, cheeger, mid);
        let cell_slack =
            (derivative_bound(alpha, cheeger, p1) - derivative_bound(alpha, cheeger, p0)).abs();
        cells.push(DerivativeCell {
            p_lo: p0,
            p_hi: p1,
            slope,
            bound_mid,
            cell_slack,
        });
    }
    Ok(cells)
}

/// Check that every finite-difference slope stays below the bound at the
/// cell midpoint, within the slack of the bound's own variation across the
/// cell. Reports the worst cell.
pub fn quantile_derivative_check(
    q: &EmpiricalQuantile,
    alpha: f64,
    cheeger: f64,
) -> Result<BoundReport> {
    let cells = derivative_cells(q, alpha, cheeger)?;
    let worst = cells
        .iter()
        .max_by(|a, b| {
            let ma = a.slope - (a.bound_mid + a.cell_slack);
            let mb = b.slope - (b.bound_mid + b.cell_slack);
            ma.partial_cmp(&mb).unwrap()
        })
        .expect("at least one cell");
    Ok(BoundReport::exact(
        "quantile-derivative",
        Relation::UpperBound,
        worst.slope,
        worst.bound_mid + worst.cell_slack,
        json!({
            "alpha": alpha,
            "cheeger": cheeger,
            "cells": cells.len(),
            "worst_p": 0.5 * (worst.p_lo + worst.p_hi),
            "worst_ratio": worst.ratio(),
        }),
    ))
}

/// Tail bound from integrating the derivative bound:
/// `Q(t) <= I^{1/alpha} (alpha/(1-alpha)) (1-t)^{1 - 1/alpha}` for a
/// median-centered quantile and t in (1/2, 1).
pub fn ftc_tail_bound(
    q: &EmpiricalQuantile,
    alpha: f64,
    cheeger: f64,
    t: f64,
) -> Result<BoundReport> {
    if !(t > 0.5 && t < 1.0) {
        return Err(Error::domain(format!(
            "tail bound requires t in (1/2, 1) (got {t})"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "tail bound requires 0 < alpha < 1 (got {alpha})"
        )));
    }
    if !q.centered {
        return Err(Error::domain(
            "tail bound requires a median-centered quantile",
        ));
    }
    let lhs = q.eval(t);
    let rhs =
        cheeger.powf(1.0 / alpha) * (alpha / (1.0 - alpha)) * (1.0 - t).powf(1.0 - 1.0 / alpha);
    Ok(BoundReport::exact(
        format!("ftc-tail[t={t}]"),
        Relation::UpperBound,
        lhs,
        rhs,
        json!({"alpha": alpha, "cheeger": cheeger, "t": t}),
    ))
}

/// The truncation inequality:
/// `E|f|^beta <= c1(alpha,beta,gamma,I) E|(f^gamma)_{[-1/2,1/2]}|^{1 - beta(1-alpha)/alpha}`,
/// both sides evaluated in the quantile representation.
pub fn truncation_inequality_check(
    q: &EmpiricalQuantile,
    alpha: f64,
    beta: f64,
    gamma: f64,
    cheeger: f64,
) -> Result<BoundReport> {
    if !q.centered {
        return Err(Error::domain(
            "truncation inequality requires a median-centered quantile",
        ));
    }
    let c1 = constants::truncation_constant(alpha, beta, gamma, cheeger)?;
    let lhs = q.integral_abs_pow(beta)?;
    let trunc = q.integral_truncated_signpow(gamma)?;
    let rhs = c1.value * trunc.powf(1.0 - beta * (1.0 - alpha) / alpha);
    Ok(BoundReport::exact(
        format!("truncation[beta={beta},gamma={gamma}]"),
        Relation::UpperBound,
        lhs,
        rhs,
        json!({
            "alpha": alpha, "beta": beta, "gamma": gamma, "cheeger": cheeger,
            "c1": c1.value, "truncated_moment": trunc,
        }),
    ))
}

/// The majorant `G_gamma(x) = I^{gamma/alpha} (alpha/(1-alpha))^gamma
/// (1-x)^{-gamma(1-alpha)/alpha}` whose derivative dominates that of
/// Q_f^gamma on [1/2, 1).
pub fn g_gamma_majorant(alpha: f64, gamma: f64, cheeger: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "majorant requires 1/2 < alpha < 1 (got {alpha})"
        )));
    }
    if !(gamma >= 1.0 && gamma < alpha / (1.0 - alpha)) {
        return Err(Error::domain(format!(
            "majorant requires 1 <= gamma < alpha/(1-alpha) (got {gamma})"
        )));
    }
    if !(0.5..1.0).contains(&x) {
        return Err(Error::domain(format!(
            "majorant is defined on [1/2, 1) (got x={x})"
        )));
    }
    Ok(cheeger.powf(gamma / alpha)
        * (alpha / (1.0 - alpha)).powf(gamma)
        * (1.0 - x).powf(-gamma * (1.0 - alpha) / alpha))
}

/// The point splitting the mass of an increasing function in half.
#[derive(Debug, Clone, Copy)]
pub struct HalfMassPoint {
    pub p_value: f64,
    /// Total mass M of g over [1/2, 1).
    pub mass: f64,
}

/// Solve `int_p^1 (g(x) - g(p)) dx = M/2` for an increasing continuous
/// integrable `g` on [1/2, 1), by bisection to 1e-10 in p. The residual of
/// the defining equation is re-verified by quadrature before returning.
///
/// `g` blowing up at 1 hits the f64 grid floor in this parameterization
/// (the equation can then only be certified to ~1e-6); supply the tail
/// form through [`half_mass_point_tail`] for such functions.
pub fn half_mass_point<G: Fn(f64) -> f64>(g: G) -> Result<HalfMassPoint> {
    half_mass_point_tail(move |u: f64| g(1.0 - u))
}

/// [`half_mass_point`] with the function supplied in tail coordinates,
/// `g_tail(u) = g(1 - u)` for u in (0, 1/2]. Quadrature nodes then sit on
/// the dense float grid near the singular end, so the defining equation is
/// certified to 1e-8 even for majorants that blow up at 1.
pub fn half_mass_point_tail<G: Fn(f64) -> f64>(g_tail: G) -> Result<HalfMassPoint> {
    let mass = quad::integrate(&g_tail, 0.0, 0.5, quad::DEFAULT_TOL)
        .map_err(|_| Error::numeric("half-mass point: g is not integrable on [1/2, 1)"))?;
    if !(mass.is_finite() && mass >= 0.0) {
        return Err(Error::numeric(
            "half-mass point: mass must be finite and nonnegative",
        ));
    }
    // In q = 1 - p: chi(q) = int_0^q g_tail(u) du - g_tail(q) q - M/2,
    // strictly increasing from -M/2 toward M/2 - g(1/2)/2 >= 0.
    let chi = |q: f64| -> Result<f64> {
        let head = quad::integrate(&g_tail, 0.0, q, quad::DEFAULT_TOL)?;
        Ok(head - g_tail(q) * q - 0.5 * mass)
    };
    let mut lo = 1e-15;
    let mut hi = 0.5;
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if chi(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = 0.5 * (lo + hi);
    let residual = chi(q)?;
    if residual.abs() > 1e-8 * mass.max(1.0) {
        return Err(Error::numeric(format!(
            "half-mass point residual {residual} exceeds tolerance"
        )));
    }
    Ok(HalfMassPoint {
        p_value: 1.0 - q,
        mass,
    })
}

/// The tail-moment lower bound: with `M = int_0^inf tail(t) dt`,
/// `int_0^inf tail(t)^beta dt >= c4 * M^{(alpha beta + gamma alpha - gamma)/(alpha + gamma alpha - gamma)}`.
///
/// `tail` must be the decreasing function `t -> P(sign(f) |f|^gamma >= t)`.
pub fn main_l2_inequality_check<T: Fn(f64) -> f64>(
    tail: T,
    alpha: f64,
    beta: f64,
    gamma: f64,
    cheeger: f64,
) -> Result<BoundReport> {
    let c4 = constants::tail_moment_constant(alpha, beta, gamma, cheeger)?;
    let m = quad::integrate(&tail, 0.0, f64::INFINITY, quad::DEFAULT_TOL)
        .map_err(|_| Error::numeric("tail-moment check: M is infinite"))?;
    let lhs = quad::integrate(
        |t| tail(t).powf(beta),
        0.0,
        f64::INFINITY,
        quad::DEFAULT_TOL,
    )?;
    let expo = (alpha * beta + gamma * alpha - gamma) / (alpha + gamma * alpha - gamma);
    let rhs = c4.value * m.powf(expo);
    Ok(BoundReport::exact(
        format!("tail-moment[beta={beta},gamma={gamma}]"),
        Relation::LowerBound,
        lhs,
        rhs,
        json!({
            "alpha": alpha, "beta": beta, "gamma": gamma, "cheeger": cheeger,
            "c4": c4.value, "mass": m, "exponent": expo,
        }),
    ))
}
