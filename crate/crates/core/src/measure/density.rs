use super::{Measure1d, Moments, Support};
use crate::error::{Error, Result};
use crate::quad;
use std::sync::Arc;

const PANELS: usize = 4096;
const WINDOW_TAIL: f64 = 1e-13;

/// A measure defined by an arbitrary (integrable, nonnegative) density.
///
/// The CDF is built by adaptive quadrature with the 1/u change of variables
/// on unbounded tails; quantiles come from monotone root-finding against a
/// precomputed cumulative table. If the raw density integrates to Z with
/// |Z - 1| <= 1e-6 it is renormalized silently; larger deviations are an
/// error, so genuine user mistakes are not masked.
pub struct DensityMeasure {
    name: String,
    raw: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    support: Support,
    norm: f64,
    win_lo: f64,
    win_hi: f64,
    panel_width: f64,
    /// Normalized CDF at the panel edges (PANELS + 1 entries).
    cum: Vec<f64>,
}

impl DensityMeasure {
    pub fn from_density<F>(name: impl Into<String>, density: F, support: Support) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let name = name.into();
        let raw: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(density);
        if !(support.lo < support.hi) {
            return Err(Error::domain("density support must be a nonempty interval"));
        }

        let f = raw.clone();
        let total = quad::integrate(|x| f(x), support.lo, support.hi, 1e-11).map_err(|_| {
            Error::domain(format!(
                "density for '{name}' is not integrable on its support"
            ))
        })?;
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::domain(format!(
                "density for '{name}' is not integrable on its support"
            )));
        }
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::domain(format!(
                "density for '{name}' integrates to {total}, more than 1e-6 away from 1"
            )));
        }
        let norm = 1.0 / total;

        // Pick a finite window carrying all but WINDOW_TAIL of the mass.
        let win_lo = if support.lo.is_finite() {
            support.lo
        } else {
            let mut t = -1.0;
            for _ in 0..60 {
                let tail = quad::integrate(|x| f(x), f64::NEG_INFINITY, t, 1e-14)?;
                if tail <= WINDOW_TAIL * total {
                    break;
                }
                t *= 2.0;
            }
            t
        };
        let win_hi = if support.hi.is_finite() {
            support.hi
        } else {
            let mut t = if win_lo >= 1.0 { 2.0 * win_lo } else { 1.0 };
            for _ in 0..60 {
                let tail = quad::integrate(|x| f(x), t, f64::INFINITY, 1e-14)?;
                if tail <= WINDOW_TAIL * total {
                    break;
                }
                t *= 2.0;
            }
            t
        };

        let panel_width = (win_hi - win_lo) / PANELS as f64;
        let mut cum = Vec::with_capacity(PANELS + 1);
        let below = if support.lo < win_lo {
            quad::integrate(|x| f(x), support.lo, win_lo, 1e-13)?
        } else {
            0.0
        };
        cum.push(below * norm);
        for i in 0..PANELS {
            let a = win_lo + panel_width * i as f64;
            let b = win_lo + panel_width * (i + 1) as f64;
            // probe for negative density at the panel edges and midpoint
            for x in [a, 0.5 * (a + b), b] {
                if f(x) < -1e-12 {
                    return Err(Error::domain(format!(
                        "negative density detected for '{name}' at x={x}"
                    )));
                }
            }
            let mass = quad::integrate(|x| f(x), a, b, 2e-14)?;
            let prev = *cum.last().unwrap();
            cum.push((prev + mass * norm).min(1.0));
        }

        Ok(DensityMeasure {
            name,
            raw,
            support,
            norm,
            win_lo,
            win_hi,
            panel_width,
            cum,
        })
    }

    fn partial(&self, a: f64, x: f64) -> f64 {
        let f = &self.raw;
        quad::integrate(|t| f(t), a, x, 1e-13).unwrap_or(f64::NAN) * self.norm
    }

    /// Solve cdf(x) = p inside [lo, hi] by bisection followed by Newton
    /// polishing.
    fn invert_in(&self, mut lo: f64, mut hi: f64, p: f64) -> f64 {
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..6 {
            let c = self.cdf(x);
            let d = self.density(x);
            if d <= 0.0 {
                break;
            }
            let step = (c - p) / d;
            let next = x - step;
            if !next.is_finite() || next <= self.support.lo || next >= self.support.hi {
                break;
            }
            x = next;
            if step.abs() < 1e-15 * (1.0 + x.abs()) {
                break;
            }
        }
        x
    }
}

impl Measure1d for DensityMeasure {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn support(&self) -> Support {
        self.support
    }

    fn density(&self, x: f64) -> f64 {
        if self.support.contains(x) {
            (self.raw)(x).max(0.0) * self.norm
        } else {
            0.0
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= self.support.lo {
            return 0.0;
        }
        if x >= self.support.hi {
            return 1.0;
        }
        if x <= self.win_lo {
            return self.partial(self.support.lo, x).clamp(0.0, 1.0);
        }
        if x >= self.win_hi {
            return (1.0 - self.upper_tail(x)).clamp(0.0, 1.0);
        }
        let j = (((x - self.win_lo) / self.panel_width) as usize).min(PANELS - 1);
        let edge = self.win_lo + self.panel_width * j as f64;
        (self.cum[j] + self.partial(edge, x)).clamp(0.0, 1.0)
    }

    fn upper_tail(&self, x: f64) -> f64 {
        if x >= self.win_hi {
            // integrate the tail directly to keep relative accuracy
            let f = &self.raw;
            return quad::integrate(|t| f(t), x.min(self.support.hi), self.support.hi, 1e-13)
                .unwrap_or(0.0)
                * self.norm;
        }
        1.0 - self.cdf(x)
    }

    fn quantile(&self, p: f64) -> f64 {
        let first = self.cum[0];
        let last = *self.cum.last().unwrap();
        if p < first {
            // below the table window: expand a bracket downward (rare)
            let mut lo = self.win_lo - 1.0 - self.win_lo.abs();
            for _ in 0..60 {
                if self.cdf(lo) <= p || lo <= self.support.lo {
                    break;
                }
                lo = self.win_lo - 2.0 * (self.win_lo - lo);
            }
            return self.invert_in(lo.max(self.support.lo), self.win_lo, p);
        }
        if p > last {
            let mut hi = self.win_hi + 1.0 + self.win_hi.abs();
            for _ in 0..60 {
                if self.cdf(hi) >= p || hi >= self.support.hi {
                    break;
                }
                hi = self.win_hi + 2.0 * (hi - self.win_hi);
            }
            return self.invert_in(self.win_hi, hi.min(self.support.hi), p);
        }
        let j = match self.cum.binary_search_by(|c| c.partial_cmp(&p).unwrap()) {
            Ok(j) => j.min(PANELS - 1),
            Err(j) => j.saturating_sub(1).min(PANELS - 1),
        };
        let a = self.win_lo + self.panel_width * j as f64;
        let b = a + self.panel_width;
        self.invert_in(a, b, p)
    }

    fn moments(&self) -> Option<Moments> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Pareto;

    #[test]
    fn uniform_quantile_is_identity() {
        let m = DensityMeasure::from_density("u01", |_| 1.0, Support::new(0.0, 1.0)).unwrap();
        for p in [0.05, 0.25, 0.5, 0.75, 0.95] {
            assert!((m.quantile(p) - p).abs() < 1e-10, "p={p}");
        }
    }

    #[test]
    fn unnormalized_density_is_rejected() {
        // half-Gaussian shape, integral sqrt(pi/2) != 1
        let r = DensityMeasure::from_density(
            "halfnorm",
            |x: f64| (-0.5 * x * x).exp(),
            Support::new(0.0, f64::INFINITY),
        );
        assert!(r.is_err());
    }

    #[test]
    fn negative_density_is_rejected() {
        let r = DensityMeasure::from_density("bad", |x: f64| 1.5 - x, Support::new(0.0, 2.0));
        assert!(r.is_err());
    }

    #[test]
    fn two_sided_density_matches_closed_form_law() {
        use crate::measure::Laplace;
        let exact = Laplace::new(1.0).unwrap();
        let m = DensityMeasure::from_density(
            "laplace1",
            |x: f64| 0.5 * (-x.abs()).exp(),
            Support::new(f64::NEG_INFINITY, f64::INFINITY),
        )
        .unwrap();
        for i in -60..=60 {
            let x = 0.25 * i as f64;
            assert!(
                (m.cdf(x) - exact.cdf(x)).abs() < 1e-9,
                "x={x}: {} vs {}",
                m.cdf(x),
                exact.cdf(x)
            );
        }
        for p in [0.001, 0.1, 0.5, 0.9, 0.999] {
            assert!(
                (m.quantile(p) - exact.quantile(p)).abs() < 1e-8,
                "p={p}: {} vs {}",
                m.quantile(p),
                exact.quantile(p)
            );
        }
        // relative-accuracy tail beyond the table window
        let far = 40.0;
        let t = m.upper_tail(far);
        let expect = exact.upper_tail(far);
        assert!((t - expect).abs() < 1e-6 * expect, "{t} vs {expect}");
    }

    #[test]
    fn pareto_density_reproduces_closed_form_cdf() {
        let exact = Pareto::new(5.0).unwrap();
        let m = DensityMeasure::from_density(
            "pareto5",
            |x: f64| if x < 1.0 { 0.0 } else { 4.0 * x.powf(-5.0) },
            Support::new(1.0, f64::INFINITY),
        )
        .unwrap();
        for i in 0..100 {
            let x = 1.0 + 0.25 * i as f64;
            assert!(
                (m.cdf(x) - exact.cdf(x)).abs() < 1e-8,
                "x={x}: {} vs {}",
                m.cdf(x),
                exact.cdf(x)
            );
        }
        for p in [0.01, 0.3, 0.5, 0.9, 0.99, 0.9999] {
            assert!(
                (m.quantile(p) - exact.quantile(p)).abs() < 1e-7 * exact.quantile(p).abs().max(1.0),
                "p={p}"
            );
        }
    }
}
