use super::{Measure1d, Moments, Support};
use crate::error::{Error, Result};

/// Power-law measure on [1, inf) with density `(lambda - 1) x^{-lambda}`.
///
/// The mean is finite for `lambda > 2` and the variance for `lambda > 3`;
/// divergent moments are reported as infinity.
#[derive(Debug, Clone, Copy)]
pub struct Pareto {
    lambda: f64,
}

impl Pareto {
    pub fn new(lambda: f64) -> Result<Pareto> {
        if !(lambda > 1.0) {
            return Err(Error::domain(format!(
                "pareto measure requires lambda > 1 (got {lambda})"
            )));
        }
        Ok(Pareto { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl Measure1d for Pareto {
    fn name(&self) -> String {
        format!("pareto:lambda={}", self.lambda)
    }

    fn support(&self) -> Support {
        Support::new(1.0, f64::INFINITY)
    }

    fn density(&self, x: f64) -> f64 {
        if x < 1.0 {
            0.0
        } else {
            (self.lambda - 1.0) * x.powf(-self.lambda)
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 1.0 {
            0.0
        } else {
            1.0 - x.powf(1.0 - self.lambda)
        }
    }

    fn upper_tail(&self, x: f64) -> f64 {
        if x <= 1.0 {
            1.0
        } else {
            x.powf(1.0 - self.lambda)
        }
    }

    fn quantile(&self, p: f64) -> f64 {
        (1.0 - p).powf(-1.0 / (self.lambda - 1.0))
    }

    fn quantile_complement(&self, u: f64) -> f64 {
        u.powf(-1.0 / (self.lambda - 1.0))
    }

    fn moments(&self) -> Option<Moments> {
        let l = self.lambda;
        let mean = if l > 2.0 {
            (l - 1.0) / (l - 2.0)
        } else {
            f64::INFINITY
        };
        let variance = if l > 3.0 {
            (l - 1.0) / (l - 3.0) - mean * mean
        } else {
            f64::INFINITY
        };
        Some(Moments { mean, variance })
    }
}
