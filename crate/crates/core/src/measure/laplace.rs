use super::{Measure1d, Moments, Support};
use crate::error::{Error, Result};

/// Two-sided exponential with density `(rate/2) e^{-rate |x|}` on the line.
#[derive(Debug, Clone, Copy)]
pub struct Laplace {
    rate: f64,
}

impl Laplace {
    pub fn new(rate: f64) -> Result<Laplace> {
        if !(rate > 0.0) {
            return Err(Error::domain(format!(
                "two-sided exponential requires rate > 0 (got {rate})"
            )));
        }
        Ok(Laplace { rate })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

impl Measure1d for Laplace {
    fn name(&self) -> String {
        format!("laplace:rate={}", self.rate)
    }

    fn support(&self) -> Support {
        Support::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    fn density(&self, x: f64) -> f64 {
        0.5 * self.rate * (-self.rate * x.abs()).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.5 * (self.rate * x).exp()
        } else {
            1.0 - 0.5 * (-self.rate * x).exp()
        }
    }

    /// P(X >= x) = (1/2) e^{-rate x} for x >= 0.
    fn upper_tail(&self, x: f64) -> f64 {
        if x < 0.0 {
            1.0 - 0.5 * (self.rate * x).exp()
        } else {
            0.5 * (-self.rate * x).exp()
        }
    }

    fn quantile(&self, p: f64) -> f64 {
        if p < 0.5 {
            (2.0 * p).ln() / self.rate
        } else {
            -(2.0 * (1.0 - p)).ln() / self.rate
        }
    }

    fn quantile_complement(&self, u: f64) -> f64 {
        if u <= 0.5 {
            -(2.0 * u).ln() / self.rate
        } else {
            self.quantile(1.0 - u)
        }
    }

    fn moments(&self) -> Option<Moments> {
        Some(Moments {
            mean: 0.0,
            variance: 2.0 / (self.rate * self.rate),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    #[test]
    fn rejects_nonpositive_rate() {
        assert!(Laplace::new(0.0).is_err());
        assert!(Laplace::new(-1.0).is_err());
    }

    #[test]
    fn tail_at_zero_is_half() {
        let m = Laplace::new(1.0).unwrap();
        assert_eq!(m.upper_tail(0.0), 0.5);
    }

    #[test]
    fn variance_matches_quadrature() {
        let m = Laplace::new(1.0).unwrap();
        let ex2 = integrate(
            |x| x * x * m.density(x),
            f64::NEG_INFINITY,
            f64::INFINITY,
            1e-12,
        )
        .unwrap();
        assert!((ex2 - 2.0).abs() < 1e-9, "{ex2}");
    }

    #[test]
    fn tail_closed_form_cross_checked_by_quadrature() {
        // rate=2 at x=1: (1/2) e^{-2}
        let m = Laplace::new(2.0).unwrap();
        let expect = 0.5 * (-2.0f64).exp();
        assert!((m.upper_tail(1.0) - expect).abs() < 1e-15);
        let by_quad = integrate(|x| m.density(x), 1.0, f64::INFINITY, 1e-12).unwrap();
        assert!((by_quad - expect).abs() < 1e-10);
    }
}
