//! Test functions used by the bound verifiers: each carries pointwise
//! evaluation, an almost-everywhere gradient, a declared metric, and a
//! declared Lipschitz constant (<= 1 for every built-in).
//!
//! Functions are immutable strategies behind `Arc<dyn LipschitzFn>`,
//! registered by name and built from `name:key=value` specs.

use crate::error::{Error, Result};
use crate::params::Spec;
use crate::rng;
use std::sync::Arc;

/// The metric the Lipschitz constant refers to. `P(2)` is Euclidean;
/// the dual exponent p/(p-1) governs the coordinate-gradient bound
/// (1 at p = infinity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    P(f64),
    Inf,
}

impl Metric {
    pub fn dual_exponent(&self) -> f64 {
        match self {
            Metric::P(p) => p / (p - 1.0),
            Metric::Inf => 1.0,
        }
    }

    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Metric::P(p) => x
                .iter()
                .zip(y)
                .map(|(a, b)| (a - b).abs().powf(*p))
                .sum::<f64>()
                .powf(1.0 / p),
            Metric::Inf => x
                .iter()
                .zip(y)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        }
    }

    /// The p value as a float (f64::INFINITY for the sup metric).
    pub fn p(&self) -> f64 {
        match self {
            Metric::P(p) => *p,
            Metric::Inf => f64::INFINITY,
        }
    }
}

pub trait LipschitzFn: Send + Sync {
    fn name(&self) -> String;
    fn arity(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
    /// Almost-everywhere gradient written into `out` (len = arity).
    fn grad(&self, x: &[f64], out: &mut [f64]);
    fn metric(&self) -> Metric;
    fn lipschitz_constant(&self) -> f64;
    /// True when `x` is within `band` of a non-differentiability surface;
    /// finite-difference checks skip such points.
    fn near_kink(&self, _x: &[f64], _band: f64) -> bool {
        false
    }
}

/// f(x) = max_i x_i, the classical counterexample to dimension-free
/// variance bounds. Gradient is the indicator of the argmax coordinate,
/// lowest index on ties. Declared for the sup metric, which makes it
/// 1-Lipschitz for every d_p (d_p >= d_inf); in particular |grad|_2 = 1
/// almost everywhere.
pub struct MaxFn {
    n: usize,
}

impl MaxFn {
    pub fn new(n: usize) -> Result<MaxFn> {
        if n == 0 {
            return Err(Error::domain("max function requires n >= 1"));
        }
        Ok(MaxFn { n })
    }
}

impl LipschitzFn for MaxFn {
    fn name(&self) -> String {
        format!("max[n={}]", self.n)
    }
    fn arity(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &[f64]) -> f64 {
        x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
    fn grad(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        let mut best = 0usize;
        for i in 1..x.len() {
            if x[i] > x[best] {
                best = i;
            }
        }
        out[best] = 1.0;
    }
    fn metric(&self) -> Metric {
        Metric::Inf
    }
    fn lipschitz_constant(&self) -> f64 {
        1.0
    }
    fn near_kink(&self, x: &[f64], band: f64) -> bool {
        if x.len() < 2 {
            return false;
        }
        let m = self.eval(x);
        x.iter().filter(|&&v| m - v < band).count() > 1
    }
}

/// The 1-D ramp f_m(x) = (x - m) for x >= m, 0 below.
pub struct ActivationFn {
    m: f64,
}

impl ActivationFn {
    pub fn new(m: f64) -> Result<ActivationFn> {
        if !(m >= 1.0) {
            return Err(Error::domain(format!(
                "activation requires m >= 1 (got {m})"
            )));
        }
        Ok(ActivationFn { m })
    }

    pub fn threshold(&self) -> f64 {
        self.m
    }
}

impl LipschitzFn for ActivationFn {
    fn name(&self) -> String {
        format!("activation[m={}]", self.m)
    }
    fn arity(&self) -> usize {
        1
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (x[0] - self.m).max(0.0)
    }
    fn grad(&self, x: &[f64], out: &mut [f64]) {
        out[0] = if x[0] > self.m { 1.0 } else { 0.0 };
    }
    fn metric(&self) -> Metric {
        Metric::P(2.0)
    }
    fn lipschitz_constant(&self) -> f64 {
        1.0
    }
    fn near_kink(&self, x: &[f64], band: f64) -> bool {
        (x[0] - self.m).abs() < band
    }
}

/// f(x) = n^{-(p-1)/p} sum x_i, the d_p-1-Lipschitz scaled sum; its
/// coordinate gradients satisfy the dual-norm identity
/// sum |d_i f|^{p/(p-1)} = n * n^{-1} = 1.
pub struct ScaledSumFn {
    n: usize,
    p: f64,
    coeff: f64,
}

impl ScaledSumFn {
    pub fn new(n: usize, p: f64) -> Result<ScaledSumFn> {
        if n == 0 {
            return Err(Error::domain("scaled sum requires n >= 1"));
        }
        if !(p > 1.0 && p <= 2.0) {
            return Err(Error::domain(format!(
                "scaled sum requires 1 < p <= 2 (got {p})"
            )));
        }
        Ok(ScaledSumFn {
            n,
            p,
            coeff: (n as f64).powf(-(p - 1.0) / p),
        })
    }

    pub fn coefficient(&self) -> f64 {
        self.coeff
    }
}

impl LipschitzFn for ScaledSumFn {
    fn name(&self) -> String {
        format!("scaled_sum[n={},p={}]", self.n, self.p)
    }
    fn arity(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &[f64]) -> f64 {
        self.coeff * x.iter().sum::<f64>()
    }
    fn grad(&self, _x: &[f64], out: &mut [f64]) {
        out.fill(self.coeff);
    }
    fn metric(&self) -> Metric {
        Metric::P(self.p)
    }
    fn lipschitz_constant(&self) -> f64 {
        1.0
    }
}

/// An axis-aligned box, one (lo, hi) pair per coordinate.
#[derive(Debug, Clone)]
pub struct AxisBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<AxisBox> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::domain("box needs matching non-empty lo/hi"));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l <= h)) {
            return Err(Error::domain("box requires lo <= hi in every coordinate"));
        }
        Ok(AxisBox { lo, hi })
    }

    /// Euclidean distance from `x`, via coordinate-wise clamping.
    pub fn distance(&self, x: &[f64]) -> f64 {
        self.gap_squared(x).sqrt()
    }

    fn gap_squared(&self, x: &[f64]) -> f64 {
        x.iter()
            .enumerate()
            .map(|(i, &v)| {
                let g = (self.lo[i] - v).max(0.0).max(v - self.hi[i]);
                g * g
            })
            .sum()
    }

    fn project(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, &v)| v.clamp(self.lo[i], self.hi[i]))
            .collect()
    }
}

/// f(x) = min{ d(x, union of boxes), cap }, 1-Lipschitz in d_2.
pub struct DistanceToSetFn {
    boxes: Vec<AxisBox>,
    cap: f64,
    n: usize,
}

impl DistanceToSetFn {
    pub fn new(boxes: Vec<AxisBox>, cap: f64) -> Result<DistanceToSetFn> {
        if boxes.is_empty() {
            return Err(Error::domain(
                "distance-to-set requires a nonempty box list",
            ));
        }
        if !(cap > 0.0) {
            return Err(Error::domain(format!("cap must be positive (got {cap})")));
        }
        let n = boxes[0].lo.len();
        if boxes.iter().any(|b| b.lo.len() != n) {
            return Err(Error::domain("all boxes must share one dimension"));
        }
        Ok(DistanceToSetFn { boxes, cap, n })
    }

    fn nearest(&self, x: &[f64]) -> (usize, f64) {
        let mut best = (0usize, f64::INFINITY);
        for (i, b) in self.boxes.iter().enumerate() {
            let d = b.distance(x);
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }
}

impl LipschitzFn for DistanceToSetFn {
    fn name(&self) -> String {
        format!("dist_box[boxes={},cap={}]", self.boxes.len(), self.cap)
    }
    fn arity(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &[f64]) -> f64 {
        self.nearest(x).1.min(self.cap)
    }
    fn grad(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        let (i, d) = self.nearest(x);
        if d <= 0.0 || d >= self.cap {
            return;
        }
        let proj = self.boxes[i].project(x);
        for (k, o) in out.iter_mut().enumerate() {
            *o = (x[k] - proj[k]) / d;
        }
    }
    fn metric(&self) -> Metric {
        Metric::P(2.0)
    }
    fn lipschitz_constant(&self) -> f64 {
        1.0
    }
    fn near_kink(&self, x: &[f64], band: f64) -> bool {
        let (i, d) = self.nearest(x);
        if d < band || (d - self.cap).abs() < band {
            return true;
        }
        // Voronoi boundary between boxes
        self.boxes
            .iter()
            .enumerate()
            .any(|(j, b)| j != i && (b.distance(x) - d).abs() < band)
    }
}

/// f(x) = |x|_2; gradient x/|x|_2, the zero vector at the origin.
pub struct L2NormFn {
    n: usize,
}

impl L2NormFn {
    pub fn new(n: usize) -> Result<L2NormFn> {
        if n == 0 {
            return Err(Error::domain("l2 norm requires n >= 1"));
        }
        Ok(L2NormFn { n })
    }
}

impl LipschitzFn for L2NormFn {
    fn name(&self) -> String {
        format!("l2_norm[n={}]", self.n)
    }
    fn arity(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
    fn grad(&self, x: &[f64], out: &mut [f64]) {
        let r = self.eval(x);
        if r == 0.0 {
            out.fill(0.0);
        } else {
            for (o, v) in out.iter_mut().zip(x) {
                *o = v / r;
            }
        }
    }
    fn metric(&self) -> Metric {
        Metric::P(2.0)
    }
    fn lipschitz_constant(&self) -> f64 {
        1.0
    }
    fn near_kink(&self, x: &[f64], band: f64) -> bool {
        self.eval(x) < band
    }
}

/// f(x) = w . x with |w|_2 <= 1.
pub struct LinearFn {
    w: Vec<f64>,
}

impl LinearFn {
    pub fn new(w: Vec<f64>) -> Result<LinearFn> {
        if w.is_empty() {
            return Err(Error::domain("linear function requires weights"));
        }
        let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1.0 + 1e-12 {
            return Err(Error::domain(format!(
                "linear weights must have |w|_2 <= 1 (got {norm})"
            )));
        }
        Ok(LinearFn { w })
    }
}

impl LipschitzFn for LinearFn {
    fn name(&self) -> String {
        format!("linear[n={}]", self.w.len())
    }
    fn arity(&self) -> usize {
        self.w.len()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        self.w.iter().zip(x).map(|(w, v)| w * v).sum()
    }
    fn grad(&self, _x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.w);
    }
    fn metric(&self) -> Metric {
        Metric::P(2.0)
    }
    fn lipschitz_constant(&self) -> f64 {
        self.w.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

type FnBuilder = fn(&Spec, usize) -> Result<Arc<dyn LipschitzFn>>;

/// Function registry; `n` is the ambient dimension from the caller.
pub fn builders() -> &'static [(&'static str, &'static str, FnBuilder)] {
    &[
        (
            "identity",
            "identity                 1-D identity (n must be 1)",
            |_, n| {
                if n != 1 {
                    return Err(Error::config("identity requires n = 1"));
                }
                Ok(Arc::new(MaxFn::new(1)?))
            },
        ),
        (
            "max",
            "max                      coordinate maximum, d2",
            |_, n| Ok(Arc::new(MaxFn::new(n)?)),
        ),
        (
            "activation",
            "activation:m=M           ramp (x-M)+ in one variable",
            |s, n| {
                if n != 1 {
                    return Err(Error::config("activation requires n = 1"));
                }
                Ok(Arc::new(ActivationFn::new(s.f64("m")?)?))
            },
        ),
        (
            "scaled_sum",
            "scaled_sum:p=P           n^{-(P-1)/P} sum x_i, d_P",
            |s, n| Ok(Arc::new(ScaledSumFn::new(n, s.f64("p")?)?)),
        ),
        (
            "l2_norm",
            "l2_norm                  Euclidean norm, d2",
            |_, n| Ok(Arc::new(L2NormFn::new(n)?)),
        ),
        (
            "linear",
            "linear:w=a/b/...         weighted sum, |w|_2 <= 1, d2",
            |s, n| {
                let w = s.f64_list("w")?;
                if w.len() != n {
                    return Err(Error::config(format!(
                        "linear weights have length {} but n = {n}",
                        w.len()
                    )));
                }
                Ok(Arc::new(LinearFn::new(w)?))
            },
        ),
        (
            "dist_box",
            "dist_box:box=a..b x c..d,cap=C  capped distance to a box, d2",
            |s, n| {
                let raw = s
                    .params
                    .get("box")
                    .ok_or_else(|| Error::config("dist_box requires box=lo..hi x lo..hi"))?;
                let mut lo = Vec::new();
                let mut hi = Vec::new();
                for part in raw.split('x') {
                    let (l, h) = part
                        .trim()
                        .split_once("..")
                        .ok_or_else(|| Error::config("box ranges look like lo..hi"))?;
                    lo.push(crate::params::parse_f64(l)?);
                    hi.push(crate::params::parse_f64(h)?);
                }
                if lo.len() != n {
                    return Err(Error::config(format!(
                        "box has {} coordinates but n = {n}",
                        lo.len()
                    )));
                }
                let cap = s.f64_or("cap", 10.0)?;
                Ok(Arc::new(DistanceToSetFn::new(
                    vec![AxisBox::new(lo, hi)?],
                    cap,
                )?))
            },
        ),
    ]
}

/// Build a function from a spec string such as `activation:m=2`.
pub fn parse_lipschitz(spec: &str, n: usize) -> Result<Arc<dyn LipschitzFn>> {
    let parsed = Spec::parse(spec)?;
    for (name, _, build) in builders() {
        if *name == parsed.name {
            return build(&parsed, n);
        }
    }
    Err(Error::config(format!(
        "unknown function '{}'; known: {}",
        parsed.name,
        builders()
            .iter()
            .map(|(n, _, _)| *n)
            .collect::<Vec<_>>()
            .join(", ")
    )))
}

/// Worst violation of |f(x)-f(y)| <= L d(x,y) over seeded random pairs in
/// [-3, 3]^n. Nonpositive means certified.
pub fn certify_pairs(f: &dyn LipschitzFn, seed: u64, pairs: usize) -> f64 {
    let n = f.arity();
    let point = |k: u64| -> Vec<f64> {
        (0..n as u64)
            .map(|j| 6.0 * rng::uniform01(seed, k * n as u64 + j) - 3.0)
            .collect()
    };
    let metric = f.metric();
    let lip = f.lipschitz_constant();
    let mut worst = f64::NEG_INFINITY;
    for k in 0..pairs as u64 {
        let x = point(2 * k);
        let y = point(2 * k + 1);
        let v = (f.eval(&x) - f.eval(&y)).abs() - lip * metric.distance(&x, &y);
        worst = worst.max(v);
    }
    worst
}

/// Worst finite-difference error of the gradient over seeded random points
/// away from kinks, and the worst dual-norm excess `sum |d_i f|^q - 1`.
pub fn certify_gradient(
    f: &dyn LipschitzFn,
    seed: u64,
    points: usize,
    h: f64,
    kink_band: f64,
) -> (f64, f64) {
    let n = f.arity();
    let q = f.metric().dual_exponent();
    let mut grad = vec![0.0; n];
    let mut worst_fd = 0.0f64;
    let mut worst_dual = f64::NEG_INFINITY;
    for k in 0..points as u64 {
        let x: Vec<f64> = (0..n as u64)
            .map(|j| 6.0 * rng::uniform01(seed, k * n as u64 + j) - 3.0)
            .collect();
        if f.near_kink(&x, kink_band) {
            continue;
        }
        f.grad(&x, &mut grad);
        let dual: f64 = grad.iter().map(|g| g.abs().powf(q)).sum();
        worst_dual = worst_dual.max(dual - 1.0);
        let mut xp = x.clone();
        for i in 0..n {
            xp[i] = x[i] + h;
            let up = f.eval(&xp);
            xp[i] = x[i] - h;
            let dn = f.eval(&xp);
            xp[i] = x[i];
            let fd = (up - dn) / (2.0 * h);
            let err = (fd - grad[i]).abs() / grad[i].abs().max(1.0);
            worst_fd = worst_fd.max(err);
        }
    }
    (worst_fd, worst_dual)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_fn_values_and_tie_break() {
        let f = MaxFn::new(3).unwrap();
        assert_eq!(f.eval(&[1.0, 3.0, 2.0]), 3.0);
        let mut g = vec![0.0; 3];
        f.grad(&[1.0, 3.0, 2.0], &mut g);
        assert_eq!(g, vec![0.0, 1.0, 0.0]);
        // tie goes to the lowest index
        let f2 = MaxFn::new(2).unwrap();
        let mut g2 = vec![0.0; 2];
        f2.grad(&[2.0, 2.0], &mut g2);
        assert_eq!(g2, vec![1.0, 0.0]);
    }

    #[test]
    fn activation_kink_values() {
        let f = ActivationFn::new(2.0).unwrap();
        assert_eq!(f.eval(&[2.0]), 0.0);
        assert_eq!(f.eval(&[5.0]), 3.0);
        assert_eq!(f.eval(&[1.0]), 0.0);
        assert!(ActivationFn::new(0.5).is_err());
    }

    #[test]
    fn scaled_sum_coefficients() {
        let f = ScaledSumFn::new(1, 1.5).unwrap();
        assert!((f.eval(&[7.0]) - 7.0).abs() < 1e-15, "n=1 is the identity");
        let f = ScaledSumFn::new(4, 2.0).unwrap();
        assert!((f.coefficient() - 0.5).abs() < 1e-15);
        assert!(ScaledSumFn::new(4, 1.0).is_err());
        assert!(ScaledSumFn::new(4, 2.5).is_err());
    }

    #[test]
    fn distance_to_box_cases() {
        let b = AxisBox::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let f = DistanceToSetFn::new(vec![b], 10.0).unwrap();
        assert_eq!(f.eval(&[0.5, 0.5]), 0.0);
        assert!((f.eval(&[2.0, 2.0]) - 2f64.sqrt()).abs() < 1e-15);
        let b1 = AxisBox::new(vec![0.0], vec![1.0]).unwrap();
        let f1 = DistanceToSetFn::new(vec![b1], 10.0).unwrap();
        assert_eq!(f1.eval(&[3.0]), 2.0);
        // cap clamps
        let b2 = AxisBox::new(vec![0.0], vec![1.0]).unwrap();
        let f2 = DistanceToSetFn::new(vec![b2], 1.5).unwrap();
        assert_eq!(f2.eval(&[5.0]), 1.5);
    }

    #[test]
    fn l2_norm_and_linear() {
        let f = L2NormFn::new(2).unwrap();
        assert_eq!(f.eval(&[3.0, 4.0]), 5.0);
        let mut g = vec![0.0; 2];
        f.grad(&[3.0, 4.0], &mut g);
        assert!((g[0] - 0.6).abs() < 1e-15 && (g[1] - 0.8).abs() < 1e-15);
        f.grad(&[0.0, 0.0], &mut g);
        assert_eq!(g, vec![0.0, 0.0]);

        let l = LinearFn::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(l.eval(&[9.0, 4.0]), 9.0);
        assert!(LinearFn::new(vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn pairwise_certification_of_all_builtins() {
        let fns: Vec<Arc<dyn LipschitzFn>> = vec![
            Arc::new(MaxFn::new(5).unwrap()),
            Arc::new(ActivationFn::new(2.0).unwrap()),
            Arc::new(ScaledSumFn::new(9, 1.5).unwrap()),
            Arc::new(L2NormFn::new(4).unwrap()),
            Arc::new(LinearFn::new(vec![0.6, 0.8]).unwrap()),
            Arc::new(
                DistanceToSetFn::new(
                    vec![AxisBox::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()],
                    10.0,
                )
                .unwrap(),
            ),
        ];
        for f in &fns {
            let worst = certify_pairs(f.as_ref(), 11, 10_000);
            assert!(worst <= 1e-12, "{}: violation {worst}", f.name());
        }
    }

    #[test]
    fn gradient_certification_of_all_builtins() {
        let fns: Vec<Arc<dyn LipschitzFn>> = vec![
            Arc::new(MaxFn::new(5).unwrap()),
            Arc::new(ActivationFn::new(2.0).unwrap()),
            Arc::new(ScaledSumFn::new(9, 1.5).unwrap()),
            Arc::new(L2NormFn::new(4).unwrap()),
            Arc::new(LinearFn::new(vec![0.6, 0.8]).unwrap()),
            Arc::new(
                DistanceToSetFn::new(
                    vec![AxisBox::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()],
                    2.0,
                )
                .unwrap(),
            ),
        ];
        for f in &fns {
            let (fd, dual) = certify_gradient(f.as_ref(), 13, 1000, 1e-6, 1e-5);
            assert!(fd <= 1e-4, "{}: fd error {fd}", f.name());
            assert!(dual <= 1e-12, "{}: dual excess {dual}", f.name());
        }
    }

    #[test]
    fn registry_builds_by_name() {
        assert_eq!(parse_lipschitz("max", 8).unwrap().arity(), 8);
        assert_eq!(
            parse_lipschitz("activation:m=2", 1).unwrap().eval(&[5.0]),
            3.0
        );
        let f = parse_lipschitz("scaled_sum:p=1.5", 9).unwrap();
        assert_eq!(f.metric(), Metric::P(1.5));
        assert!(parse_lipschitz("sigmoid", 4).is_err());
        let d = parse_lipschitz("dist_box:box=0..1 x 0..1,cap=5", 2).unwrap();
        assert!((d.eval(&[2.0, 2.0]) - 2f64.sqrt()).abs() < 1e-12);
    }
}
