//! Numerical toolkit for heavy-tailed isoperimetric constants and the
//! variance bounds they imply for Lipschitz functions of product measures.
//!
//! The crate is organized as a set of interchangeable strategies behind
//! small traits and registries:
//!
//! - [`measure`]: 1-D laws (power-law, two-sided exponential, the
//!   maximal-fluctuation law, arbitrary densities) behind [`measure::Measure1d`],
//!   addressable by name.
//! - [`lipschitz`]: the test-function zoo behind [`lipschitz::LipschitzFn`],
//!   addressable by name and parameters.
//! - [`constants`]: the explicit bound constants, evaluated in extended
//!   precision.
//! - [`cheeger`]: half-line and brute-force estimators of the
//!   alpha-Cheeger constant of a 1-D measure.
//! - [`quantile`]: quantile-representation checks of the derivative,
//!   tail, truncation, and half-mass inequalities.
//! - [`montecarlo`]: deterministic parallel estimation of variances,
//!   gradient moments, and tails under product measures.
//! - [`linalg`]: a dense symmetric eigensolver for the random-matrix
//!   application.
//! - [`experiments`]: one verifier per bound, emitting pass/fail reports.

// Negated comparisons like `!(x > 0.0)` are deliberate: they reject NaN
// along with out-of-domain values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cheeger;
pub mod constants;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod lipschitz;
pub mod measure;
pub mod montecarlo;
pub mod params;
pub mod quad;
pub mod quantile;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
