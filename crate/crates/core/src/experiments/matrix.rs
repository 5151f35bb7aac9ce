use crate::constants;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, SymMatrix};
use crate::measure::{Measure1d, Pareto};
use crate::report::{BoundReport, Relation};
use crate::rng;
use rayon::prelude::*;
use serde_json::json;
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Variance bound for the i-th largest eigenvalue of a symmetric matrix
/// with i.i.d. power-law entries on the upper triangle:
/// `Var(lambda_i) <= 2 C(lambda) (n(n-1)/2)^{2/(lambda-1)}`.
///
/// The displayed bound uses the off-diagonal count n(n-1)/2 even though
/// the entry space has dimension n(n+1)/2; the ambient-dimension variant
/// is reported alongside without adjudication.
#[derive(Debug, Clone)]
pub struct RandomMatrixConfig {
    pub lambda: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// 1-based index into the descending spectrum.
    pub eigen_index: usize,
    pub batches: usize,
}

impl RandomMatrixConfig {
    pub fn new(lambda: f64, n: usize, trials: usize, seed: u64) -> RandomMatrixConfig {
        RandomMatrixConfig {
            lambda,
            n,
            trials,
            seed,
            eigen_index: 1,
            batches: 20,
        }
    }
}

pub fn verify_random_matrix(cfg: &RandomMatrixConfig) -> Result<Vec<BoundReport>> {
    if !(cfg.lambda > 3.0) {
        return Err(Error::domain(format!(
            "random matrix bound requires lambda > 3 (got {})",
            cfg.lambda
        )));
    }
    if cfg.n < 2 || cfg.n > 256 {
        return Err(Error::domain(format!(
            "matrix order must be in [2, 256]; n=1 degenerates the displayed bound (got {})",
            cfg.n
        )));
    }
    if cfg.trials < 100 {
        return Err(Error::domain(format!(
            "need at least 100 trials (got {})",
            cfg.trials
        )));
    }
    if cfg.eigen_index == 0 || cfg.eigen_index > cfg.n {
        return Err(Error::domain(format!(
            "eigenvalue index must be in 1..={} (got {})",
            cfg.n, cfg.eigen_index
        )));
    }
    if !cfg.trials.is_multiple_of(cfg.batches) || cfg.batches < 2 {
        return Err(Error::config(format!(
            "trials ({}) must be divisible by batches ({})",
            cfg.trials, cfg.batches
        )));
    }

    let measure = Pareto::new(cfg.lambda)?;
    let packed = cfg.n * (cfg.n + 1) / 2;

    let eigs: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let base = trial as u64 * packed as u64;
            let mut k = 0u64;
            let m = SymMatrix::from_fn(cfg.n, |_, _| {
                let v = measure.quantile(rng::uniform01(cfg.seed, base + k));
                k += 1;
                v
            })
            .expect("valid order");
            let spectrum = eigenvalues(&m).expect("finite entries");
            spectrum[cfg.eigen_index - 1]
        })
        .collect();

    // full-sample variance with batch-means CI, as in the Monte Carlo module
    let nt = cfg.trials as f64;
    let mean = eigs.iter().sum::<f64>() / nt;
    let variance = eigs.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (nt - 1.0);
    let m_per = cfg.trials / cfg.batches;
    let batch_vars: Vec<f64> = (0..cfg.batches)
        .map(|b| {
            let chunk = &eigs[b * m_per..(b + 1) * m_per];
            let bm = chunk.iter().sum::<f64>() / m_per as f64;
            chunk.iter().map(|v| (v - bm) * (v - bm)).sum::<f64>() / (m_per as f64 - 1.0)
        })
        .collect();
    let bmean = batch_vars.iter().sum::<f64>() / cfg.batches as f64;
    let bvar = batch_vars
        .iter()
        .map(|v| (v - bmean) * (v - bmean))
        .sum::<f64>()
        / (cfg.batches as f64 - 1.0);
    let half = StudentsT::new(0.0, 1.0, cfg.batches as f64 - 1.0)
        .expect("valid dof")
        .inverse_cdf(0.975)
        * (bvar / cfg.batches as f64).sqrt();
    let ci = ((variance - half).max(0.0), variance + half);

    let c_lambda = constants::pareto_product_constant(cfg.lambda)?.value;
    let expo = 2.0 / (cfg.lambda - 1.0);
    let off_diag = (cfg.n * (cfg.n - 1) / 2) as f64;
    let ambient = packed as f64;

    let base_cfg = json!({
        "lambda": cfg.lambda,
        "n": cfg.n,
        "trials": cfg.trials,
        "eigen_index": cfg.eigen_index,
        "mean_eigenvalue": mean,
        "c_lambda": c_lambda,
    });
    let mut reports = Vec::new();
    reports.push(
        BoundReport::new(
            format!("matrix-eigenvalue-variance[n={}]", cfg.n),
            Relation::UpperBound,
            variance,
            ci,
            2.0 * c_lambda * off_diag.powf(expo),
            base_cfg.clone(),
        )
        .with_seed(cfg.seed)
        .with_samples(cfg.trials as u64),
    );
    reports.push(
        BoundReport::new(
            format!("matrix-eigenvalue-variance-ambient[n={}]", cfg.n),
            Relation::UpperBound,
            variance,
            ci,
            2.0 * c_lambda * ambient.powf(expo),
            base_cfg,
        )
        .with_seed(cfg.seed)
        .with_samples(cfg.trials as u64),
    );
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    #[test]
    fn two_by_two_solver_matches_closed_form_eigenvalue() {
        // lambda_1 = ((a+c) + sqrt((a-c)^2 + 4 b^2)) / 2
        let measure = Pareto::new(5.0).unwrap();
        for trial in 0..200u64 {
            let a = measure.quantile(rng::uniform01(77, trial * 3));
            let b = measure.quantile(rng::uniform01(77, trial * 3 + 1));
            let c = measure.quantile(rng::uniform01(77, trial * 3 + 2));
            let mut m = SymMatrix::zeros(2).unwrap();
            m.set(0, 0, a);
            m.set(0, 1, b);
            m.set(1, 1, c);
            let spec = eigenvalues(&m).unwrap();
            let closed = 0.5 * ((a + c) + ((a - c) * (a - c) + 4.0 * b * b).sqrt());
            assert!((spec[0] - closed).abs() < 1e-10 * closed.abs().max(1.0));
        }
    }

    #[test]
    fn small_matrix_bound_passes() {
        let cfg = RandomMatrixConfig::new(5.0, 8, 200, 15);
        let reports = verify_random_matrix(&cfg).unwrap();
        assert_eq!(reports.len(), 2);
        for r in &reports {
            assert_eq!(r.verdict, Verdict::Pass, "{}: slack {}", r.id, r.slack);
        }
        // ambient variant has the larger right-hand side
        assert!(reports[1].rhs > reports[0].rhs);
    }

    #[test]
    fn degenerate_and_invalid_configs_are_rejected() {
        assert!(verify_random_matrix(&RandomMatrixConfig::new(5.0, 1, 200, 1)).is_err());
        assert!(verify_random_matrix(&RandomMatrixConfig::new(3.0, 8, 200, 1)).is_err());
        assert!(verify_random_matrix(&RandomMatrixConfig::new(5.0, 8, 99, 1)).is_err());
    }
}
