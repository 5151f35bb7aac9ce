//! One verifier per theorem: each assembles measures, functions, constants,
//! and Monte Carlo estimates into pass/fail [`BoundReport`]s.
//!
//! Verdicts are CI-based, never point-estimate-based, and inconclusive is a
//! first-class outcome: heavy-tailed Monte Carlo noise must not manufacture
//! flaky failures.

mod dp;
mod isoperimetric;
mod lemmas;
mod matrix;
mod pareto;
mod poincare;
mod product;
pub mod suite;
mod tails;
mod tightness;

pub use dp::{verify_dp_theorem, DpCertificate, DpTheoremConfig};
pub use isoperimetric::{verify_isoperimetric, IsoperimetricConfig};
pub use lemmas::{run_lemma_suite, LemmaSuiteConfig};
pub use matrix::{verify_random_matrix, RandomMatrixConfig};
pub use pareto::{verify_pareto_theorem, ParetoTheoremConfig};
pub use poincare::{verify_sharp_poincare_dp, SharpPoincareConfig};
pub use product::{verify_product_theorem, ProductTheoremConfig};
pub use tails::{verify_tail_bounds, TailBoundsConfig};
pub use tightness::{tightness_report, TightnessConfig, TightnessReport};

use crate::error::Result;
use crate::lipschitz::{parse_lipschitz, LipschitzFn};
use crate::measure::{parse_measure, Measure1d};
use std::sync::Arc;

pub(crate) fn build_measure(spec: &str) -> Result<Arc<dyn Measure1d>> {
    parse_measure(spec)
}

pub(crate) fn build_function(spec: &str, n: usize) -> Result<Arc<dyn LipschitzFn>> {
    parse_lipschitz(spec, n)
}

/// True when a function declared 1-Lipschitz for `declared` is automatically
/// 1-Lipschitz for `requested`: d_q >= d_p for q <= p, so a declaration at p
/// covers every smaller exponent.
pub(crate) fn metric_covers(declared: f64, requested: f64) -> bool {
    declared >= requested - 1e-12
}
