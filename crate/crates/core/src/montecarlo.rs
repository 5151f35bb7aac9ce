//! Deterministic, data-parallel Monte Carlo estimation under product
//! measures: E[f], Var(f), gradient moments, centered tail frequencies,
//! and log-log scaling fits.
//!
//! Coordinate j of sample i reads stream position `i*n + j`, so estimates
//! are bit-reproducible for a fixed `(seed, N, B)` no matter how many
//! threads run. Batches are computed independently and reduced in batch
//! order.
//!
//! Confidence intervals use batch means: the full-sample point estimate
//! centered with a Student-t half-width from the spread of per-batch
//! estimates. For heavy tails (fourth moments barely finite) the
//! median-of-batches value is carried alongside as a robustness
//! cross-check.

use crate::error::{Error, Result};
use crate::lipschitz::LipschitzFn;
use crate::measure::Measure1d;
use crate::rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};
use std::sync::Arc;

/// 0.975 standard normal quantile, for Wilson intervals.
const Z975: f64 = 1.959_963_984_540_054;

#[derive(Clone)]
pub struct EstimationPlan {
    pub measure: Arc<dyn Measure1d>,
    pub dimension: usize,
    pub function: Arc<dyn LipschitzFn>,
    pub samples: usize,
    pub seed: u64,
    pub batches: usize,
}

impl EstimationPlan {
    pub fn new(
        measure: Arc<dyn Measure1d>,
        dimension: usize,
        function: Arc<dyn LipschitzFn>,
        samples: usize,
        seed: u64,
        batches: usize,
    ) -> Result<EstimationPlan> {
        if dimension == 0 {
            return Err(Error::config("dimension must be >= 1"));
        }
        if function.arity() != dimension {
            return Err(Error::config(format!(
                "function arity {} does not match dimension {dimension}",
                function.arity()
            )));
        }
        if batches < 2 {
            return Err(Error::config("need at least 2 batches"));
        }
        if samples < 2 * batches {
            return Err(Error::config(format!(
                "samples ({samples}) must be at least twice the batch count ({batches})"
            )));
        }
        if !samples.is_multiple_of(batches) {
            return Err(Error::config(format!(
                "samples ({samples}) must be divisible by batches ({batches})"
            )));
        }
        Ok(EstimationPlan {
            measure,
            dimension,
            function,
            samples,
            seed,
            batches,
        })
    }

    #[inline]
    fn coordinate(&self, sample: u64, j: u64) -> f64 {
        self.measure.quantile(rng::uniform01(
            self.seed,
            sample * self.dimension as u64 + j,
        ))
    }

    fn eval_sample(&self, i: u64, buf: &mut [f64]) -> f64 {
        for (j, b) in buf.iter_mut().enumerate() {
            *b = self.coordinate(i, j as u64);
        }
        self.function.eval(buf)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VarianceEstimate {
    pub mean: f64,
    /// Unbiased sample variance over all N draws.
    pub variance: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Median of the per-batch variances (heavy-tail cross-check).
    pub batch_median: f64,
    pub n_samples: usize,
    pub seed: u64,
}

fn t_quantile_975(dof: f64) -> f64 {
    StudentsT::new(0.0, 1.0, dof)
        .expect("valid dof")
        .inverse_cdf(0.975)
}

fn median_of(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n.is_multiple_of(2) {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    } else {
        v[n / 2]
    }
}

struct BatchMoments {
    sum: f64,
    sumsq: f64,
}

fn batch_moments(plan: &EstimationPlan) -> Vec<BatchMoments> {
    let m = plan.samples / plan.batches;
    (0..plan.batches)
        .into_par_iter()
        .map(|b| {
            let mut buf = vec![0.0; plan.dimension];
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for i in (b * m) as u64..((b + 1) * m) as u64 {
                let v = plan.eval_sample(i, &mut buf);
                sum += v;
                sumsq += v * v;
            }
            BatchMoments { sum, sumsq }
        })
        .collect()
}

/// Unbiased sample variance of f(X_1..X_n) with a batch-means CI.
pub fn estimate_variance(plan: &EstimationPlan) -> Result<VarianceEstimate> {
    let n = plan.samples as f64;
    let m = (plan.samples / plan.batches) as f64;
    let batches = batch_moments(plan);

    let total: f64 = batches.iter().map(|b| b.sum).sum();
    let totalsq: f64 = batches.iter().map(|b| b.sumsq).sum();
    let mean = total / n;
    let variance = (totalsq - n * mean * mean) / (n - 1.0);

    let batch_vars: Vec<f64> = batches
        .iter()
        .map(|b| {
            let bm = b.sum / m;
            (b.sumsq - m * bm * bm) / (m - 1.0)
        })
        .collect();
    let bmean = batch_vars.iter().sum::<f64>() / batch_vars.len() as f64;
    let bvar = batch_vars
        .iter()
        .map(|v| (v - bmean) * (v - bmean))
        .sum::<f64>()
        / (batch_vars.len() as f64 - 1.0);
    let half = t_quantile_975(plan.batches as f64 - 1.0) * (bvar / plan.batches as f64).sqrt();

    Ok(VarianceEstimate {
        mean,
        variance,
        ci_low: (variance - half).max(0.0),
        ci_high: variance + half,
        batch_median: median_of(batch_vars),
        n_samples: plan.samples,
        seed: plan.seed,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct ScalarEstimate {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

fn batch_means_ci(batch_means: &[f64]) -> ScalarEstimate {
    let b = batch_means.len() as f64;
    let mean = batch_means.iter().sum::<f64>() / b;
    let var = batch_means
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / (b - 1.0);
    let half = t_quantile_975(b - 1.0) * (var / b).sqrt();
    ScalarEstimate {
        mean,
        ci_low: mean - half,
        ci_high: mean + half,
    }
}

/// Monte Carlo mean of |grad f|_2^q with a batch-means CI.
pub fn estimate_gradient_moment(plan: &EstimationPlan, q: f64) -> Result<ScalarEstimate> {
    if !(q >= 1.0) {
        return Err(Error::domain(format!(
            "gradient moment requires q >= 1 (got {q})"
        )));
    }
    let m = plan.samples / plan.batches;
    let means: Vec<f64> = (0..plan.batches)
        .into_par_iter()
        .map(|b| {
            let mut buf = vec![0.0; plan.dimension];
            let mut grad = vec![0.0; plan.dimension];
            let mut acc = 0.0;
            for i in (b * m) as u64..((b + 1) * m) as u64 {
                for (j, x) in buf.iter_mut().enumerate() {
                    *x = plan.coordinate(i, j as u64);
                }
                plan.function.grad(&buf, &mut grad);
                let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
                acc += norm.powf(q);
            }
            acc / m as f64
        })
        .collect();
    Ok(batch_means_ci(&means))
}

/// Per-coordinate Monte Carlo means of |d_i f|^q.
pub fn estimate_partial_moments(plan: &EstimationPlan, q: f64) -> Result<Vec<f64>> {
    if !(q >= 1.0) {
        return Err(Error::domain(format!(
            "gradient moment requires q >= 1 (got {q})"
        )));
    }
    let m = plan.samples / plan.batches;
    let per_batch: Vec<Vec<f64>> = (0..plan.batches)
        .into_par_iter()
        .map(|b| {
            let mut buf = vec![0.0; plan.dimension];
            let mut grad = vec![0.0; plan.dimension];
            let mut acc = vec![0.0; plan.dimension];
            for i in (b * m) as u64..((b + 1) * m) as u64 {
                for (j, x) in buf.iter_mut().enumerate() {
                    *x = plan.coordinate(i, j as u64);
                }
                plan.function.grad(&buf, &mut grad);
                for (a, g) in acc.iter_mut().zip(&grad) {
                    *a += g.abs().powf(q);
                }
            }
            acc
        })
        .collect();
    let mut out = vec![0.0; plan.dimension];
    for batch in &per_batch {
        for (o, v) in out.iter_mut().zip(batch) {
            *o += v;
        }
    }
    for o in &mut out {
        *o /= plan.samples as f64;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
pub struct ProbEstimate {
    pub p: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

fn wilson(count: usize, n: usize) -> ProbEstimate {
    let nf = n as f64;
    let p = count as f64 / nf;
    let z2 = Z975 * Z975;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = Z975 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ProbEstimate {
        p,
        ci_low: (center - half).max(0.0),
        ci_high: (center + half).min(1.0),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TailEstimate {
    pub threshold: f64,
    /// P(f - center >= t)
    pub upper: ProbEstimate,
    /// P(f - center <= -t)
    pub lower: ProbEstimate,
}

/// Empirical tail frequencies of f (optionally centered at its empirical
/// median) at each threshold, with Wilson confidence intervals.
pub fn estimate_tail(
    plan: &EstimationPlan,
    thresholds: &[f64],
    center_at_median: bool,
) -> Result<Vec<TailEstimate>> {
    if thresholds.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::config("thresholds must be sorted ascending"));
    }
    let m = plan.samples / plan.batches;
    let mut values: Vec<f64> = Vec::with_capacity(plan.samples);
    let per_batch: Vec<Vec<f64>> = (0..plan.batches)
        .into_par_iter()
        .map(|b| {
            let mut buf = vec![0.0; plan.dimension];
            ((b * m) as u64..((b + 1) * m) as u64)
                .map(|i| plan.eval_sample(i, &mut buf))
                .collect()
        })
        .collect();
    for batch in per_batch {
        values.extend(batch);
    }
    let center = if center_at_median {
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = sorted.len();
        if n.is_multiple_of(2) {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        } else {
            sorted[n / 2]
        }
    } else {
        0.0
    };
    Ok(thresholds
        .iter()
        .map(|&t| {
            let up = values.iter().filter(|&&v| v - center >= t).count();
            let dn = values.iter().filter(|&&v| v - center <= -t).count();
            TailEstimate {
                threshold: t,
                upper: wilson(up, values.len()),
                lower: wilson(dn, values.len()),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares fit of log(y) against log(x).
pub fn scaling_fit(xs: &[f64], ys: &[f64]) -> Result<ScalingFit> {
    if xs.len() != ys.len() || xs.len() < 4 {
        return Err(Error::config(
            "scaling fit needs at least 4 (x, y) pairs of equal length",
        ));
    }
    if ys.iter().any(|&y| !(y > 0.0)) || xs.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::domain("scaling fit requires positive inputs"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(ScalingFit {
        slope,
        intercept,
        r_squared,
    })
}
