use super::{Measure1d, Moments, Support};
use crate::error::{Error, Result};

/// Parameters of the maximal-fluctuation law X(alpha, I).
///
/// `b = 1/(1-alpha)` and `a = ((1-alpha)/alpha) I^{-1/alpha} 2^{(alpha-1)/alpha}`
/// are derived, never set directly.
#[derive(Debug, Clone, Copy)]
pub struct ExtremalParams {
    pub alpha: f64,
    pub cheeger: f64,
    pub a: f64,
    pub b: f64,
}

impl ExtremalParams {
    pub fn new(alpha: f64, cheeger: f64) -> Result<ExtremalParams> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!(
                "extremal law requires 0 < alpha < 1 (got {alpha})"
            )));
        }
        if !(cheeger > 0.0) {
            return Err(Error::domain(format!(
                "extremal law requires cheeger > 0 (got {cheeger})"
            )));
        }
        let b = 1.0 / (1.0 - alpha);
        let a =
            (1.0 - alpha) / alpha * cheeger.powf(-1.0 / alpha) * 2f64.powf((alpha - 1.0) / alpha);
        Ok(ExtremalParams {
            alpha,
            cheeger,
            a,
            b,
        })
    }
}

/// The median-centered law whose quantile derivative saturates
/// `(I / min{x, 1-x})^{1/alpha}` on both sides; every 1-Lipschitz function
/// under a measure with that certificate is dominated by it in convex order.
///
/// Density: `(a(b-1)/2) (a|x| + 1)^{-b}`. The "+1" is forced by inverting
/// the quantile branches; a "-1" does not produce a probability density.
#[derive(Debug, Clone, Copy)]
pub struct Extremal {
    params: ExtremalParams,
}

impl Extremal {
    pub fn new(params: ExtremalParams) -> Extremal {
        Extremal { params }
    }

    pub fn params(&self) -> ExtremalParams {
        self.params
    }

    fn positive_tail(&self, x: f64) -> f64 {
        0.5 * (self.params.a * x + 1.0).powf(1.0 - self.params.b)
    }
}

impl Measure1d for Extremal {
    fn name(&self) -> String {
        format!(
            "extremal:alpha={},cheeger={}",
            self.params.alpha, self.params.cheeger
        )
    }

    fn support(&self) -> Support {
        Support::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    fn density(&self, x: f64) -> f64 {
        let ExtremalParams { a, b, .. } = self.params;
        0.5 * a * (b - 1.0) * (a * x.abs() + 1.0).powf(-b)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.positive_tail(-x)
        } else {
            1.0 - self.positive_tail(x)
        }
    }

    /// P(X >= x) = (1/2)(a x + 1)^{1-b} for x >= 0.
    fn upper_tail(&self, x: f64) -> f64 {
        if x < 0.0 {
            1.0 - self.positive_tail(-x)
        } else {
            self.positive_tail(x)
        }
    }

    fn quantile(&self, p: f64) -> f64 {
        let ExtremalParams { alpha, cheeger, .. } = self.params;
        let k = cheeger.powf(1.0 / alpha) * alpha / (1.0 - alpha);
        let e = (1.0 - alpha) / alpha;
        if p >= 0.5 {
            k * ((1.0 - p).powf(-e) - 2f64.powf(e))
        } else {
            -k * (p.powf(-e) - 2f64.powf(e))
        }
    }

    fn quantile_complement(&self, u: f64) -> f64 {
        let ExtremalParams { alpha, cheeger, .. } = self.params;
        if u <= 0.5 {
            let k = cheeger.powf(1.0 / alpha) * alpha / (1.0 - alpha);
            let e = (1.0 - alpha) / alpha;
            k * (u.powf(-e) - 2f64.powf(e))
        } else {
            self.quantile(1.0 - u)
        }
    }

    fn moments(&self) -> Option<Moments> {
        let ExtremalParams { a, b, .. } = self.params;
        if b <= 2.0 {
            return None;
        }
        let variance = if b > 3.0 {
            2.0 / (a * a * (b - 2.0) * (b - 3.0))
        } else {
            f64::INFINITY
        };
        Some(Moments {
            mean: 0.0,
            variance,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    #[test]
    fn derived_parameters_match_hand_values() {
        // alpha=0.8, I=1: b = 5, a = 0.25 * 2^{-1/4}
        let p = ExtremalParams::new(0.8, 1.0).unwrap();
        assert!((p.b - 5.0).abs() < 1e-15);
        assert!((p.a - 0.25 * 2f64.powf(-0.25)).abs() < 1e-15);
        assert!((p.a - 0.2102241038134286).abs() < 1e-15);
    }

    #[test]
    fn rejects_alpha_outside_unit_interval() {
        assert!(ExtremalParams::new(1.0, 1.0).is_err());
        assert!(ExtremalParams::new(0.0, 1.0).is_err());
        assert!(ExtremalParams::new(0.5, 0.0).is_err());
    }

    #[test]
    fn median_is_zero() {
        let m = Extremal::new(ExtremalParams::new(0.7, 2.0).unwrap());
        assert_eq!(m.quantile(0.5), 0.0);
    }

    #[test]
    fn density_integrates_to_one() {
        // the check that "+1" is the correct sign inside the density
        let m = Extremal::new(ExtremalParams::new(0.8, 1.0).unwrap());
        let z = integrate(|x| m.density(x), f64::NEG_INFINITY, f64::INFINITY, 1e-12).unwrap();
        assert!((z - 1.0).abs() < 1e-8, "{z}");
    }

    #[test]
    fn numeric_cdf_inversion_reproduces_quantile_branches() {
        let m = Extremal::new(ExtremalParams::new(0.8, 1.0).unwrap());
        for p in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let q = m.quantile(p);
            // invert the cdf by bisection, independently of the branch formulas
            let (mut lo, mut hi) = (-1e6, 1e6);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if m.cdf(mid) < p {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            assert!((q - 0.5 * (lo + hi)).abs() < 1e-7, "p={p}");
        }
    }

    #[test]
    fn variance_closed_form_matches_quadrature() {
        let m = Extremal::new(ExtremalParams::new(0.8, 1.0).unwrap());
        let v = m.moments().unwrap().variance;
        let by_quad = integrate(
            |x| x * x * m.density(x),
            f64::NEG_INFINITY,
            f64::INFINITY,
            1e-12,
        )
        .unwrap();
        assert!((v - by_quad).abs() < 1e-8, "{v} vs {by_quad}");
    }
}
