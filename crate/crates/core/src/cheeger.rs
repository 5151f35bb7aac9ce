//! Estimators for the alpha-Cheeger constant of a 1-D measure:
//! `sup_A min{nu(A), 1 - nu(A)} / nu(A+)^alpha`, where `nu(A+)` is the
//! liminf boundary measure of the epsilon-enlargement.
//!
//! Two strategies are provided. The half-line scan restricts the supremum
//! to sets `(-inf, q]` / `[q, inf)` and is exact for measures whose
//! extremizers are half-lines (a lower bound in general). The brute force
//! partitions the quantile range into equal-probability cells and
//! enumerates every union, which is its own oracle at small cell counts.

use crate::error::{Error, Result};
use crate::measure::Measure1d;
use rayon::prelude::*;
use serde::Serialize;

pub const MAX_BRUTEFORCE_CELLS: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheegerMethod {
    Analytic,
    HalfLine,
    GridBruteforce,
}

/// The extremizing set backing an estimate.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Either half-line cut at `threshold = quantile(p)`; both sides give
    /// the same functional value.
    HalfLine {
        p: f64,
        threshold: f64,
    },
    /// Union of quantile-cell intervals, as (lo, hi) pairs in x-space.
    Intervals(Vec<(f64, f64)>),
    Note(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct CheegerEstimate {
    pub alpha: f64,
    pub value: f64,
    pub method: CheegerMethod,
    pub witness: Witness,
    pub grid_resolution: Option<usize>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!(
            "cheeger estimation requires 0 < alpha <= 1 (got {alpha})"
        )));
    }
    Ok(())
}

/// The half-line functional `min{p, 1-p} / density(quantile(p))^alpha`.
fn half_line_value(measure: &dyn Measure1d, alpha: f64, p: f64) -> f64 {
    let d = measure.density(measure.quantile(p));
    if d <= 0.0 {
        return f64::INFINITY;
    }
    p.min(1.0 - p) / d.powf(alpha)
}

/// Scan half-line cuts over a quantile grid, then refine around the best
/// cell by golden-section search down to 1e-10 in p.
///
/// Returns a lower bound for the alpha-Cheeger constant; it is the exact
/// value when half-lines are extremal (tail-monotone measures). A zero
/// density at a probed quantile yields `value = +inf` with the witness p.
pub fn half_line_scan(measure: &dyn Measure1d, alpha: f64, grid: usize) -> Result<CheegerEstimate> {
    check_alpha(alpha)?;
    if grid < 10 {
        return Err(Error::domain(format!(
            "half-line scan requires grid >= 10 (got {grid})"
        )));
    }

    let mut best_p = 0.5;
    let mut best = f64::NEG_INFINITY;
    for i in 1..grid {
        let p = i as f64 / grid as f64;
        let v = half_line_value(measure, alpha, p);
        if v.is_infinite() {
            return Ok(CheegerEstimate {
                alpha,
                value: f64::INFINITY,
                method: CheegerMethod::HalfLine,
                witness: Witness::Note(format!("density vanishes at quantile({p})")),
                grid_resolution: Some(grid),
            });
        }
        if v > best {
            best = v;
            best_p = p;
        }
    }

    // Golden-section refinement on [best_p - cell, best_p + cell].
    let cell = 1.0 / grid as f64;
    let mut lo = (best_p - cell).max(f64::MIN_POSITIVE);
    let mut hi = (best_p + cell).min(1.0 - f64::EPSILON);
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = half_line_value(measure, alpha, x1);
    let mut f2 = half_line_value(measure, alpha, x2);
    while hi - lo > 1e-10 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = half_line_value(measure, alpha, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = half_line_value(measure, alpha, x1);
        }
    }
    let p = 0.5 * (lo + hi);
    let refined = half_line_value(measure, alpha, p);
    let (value, p) = if refined >= best {
        (refined, p)
    } else {
        (best, best_p)
    };

    Ok(CheegerEstimate {
        alpha,
        value,
        method: CheegerMethod::HalfLine,
        witness: Witness::HalfLine {
            p,
            threshold: measure.quantile(p),
        },
        grid_resolution: Some(grid),
    })
}

/// Exhaustive search over unions of equal-probability quantile cells.
///
/// The measure of a union is exact (a multiple of 1/cells); its boundary
/// measure is the sum of density values at the cell boundaries where
/// membership flips, boundaries at the support edge contributing nothing.
/// Enumeration is partitioned across threads with a deterministic
/// max-reduction; ties go to the smallest subset bitmask.
pub fn grid_bruteforce(measure: &dyn Measure1d, alpha: f64, cells: u32) -> Result<CheegerEstimate> {
    check_alpha(alpha)?;
    if !(2..=MAX_BRUTEFORCE_CELLS).contains(&cells) {
        return Err(Error::domain(format!(
            "grid bruteforce requires 2 <= cells <= {MAX_BRUTEFORCE_CELLS} (got {cells})"
        )));
    }
    let k = cells as usize;
    // density at the interior cell boundaries quantile(i/cells), i = 1..cells-1
    let boundary_density: Vec<f64> = (1..k)
        .map(|i| measure.density(measure.quantile(i as f64 / k as f64)))
        .collect();

    let total: u64 = 1u64 << k;
    let value_of = |mask: u64| -> f64 {
        let pop = mask.count_ones() as f64;
        let nu = pop / k as f64;
        let m = nu.min(1.0 - nu);
        if m == 0.0 {
            return f64::NEG_INFINITY;
        }
        let mut boundary = 0.0;
        for (i, d) in boundary_density.iter().enumerate() {
            let left = (mask >> i) & 1;
            let right = (mask >> (i + 1)) & 1;
            if left != right {
                boundary += d;
            }
        }
        if boundary <= 0.0 {
            f64::INFINITY
        } else {
            m / boundary.powf(alpha)
        }
    };

    let (best_mask, best_value) = (1..total)
        .into_par_iter()
        .fold(
            || (0u64, f64::NEG_INFINITY),
            |(bm, bv), mask| {
                let v = value_of(mask);
                if v > bv || (v == bv && mask < bm) {
                    (mask, v)
                } else {
                    (bm, bv)
                }
            },
        )
        .reduce(
            || (0u64, f64::NEG_INFINITY),
            |(m1, v1), (m2, v2)| {
                if v1 > v2 || (v1 == v2 && m1 < m2) {
                    (m1, v1)
                } else {
                    (m2, v2)
                }
            },
        );

    // Reconstruct the witness intervals in x-space.
    let edges: Vec<f64> = (0..=k)
        .map(|i| match i {
            0 => measure.support().lo,
            i if i == k => measure.support().hi,
            i => measure.quantile(i as f64 / k as f64),
        })
        .collect();
    let mut intervals = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 0..=k {
        let inside = i < k && (best_mask >> i) & 1 == 1;
        match (inside, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(s)) => {
                intervals.push((edges[s], edges[i]));
                run_start = None;
            }
            _ => {}
        }
    }

    Ok(CheegerEstimate {
        alpha,
        value: best_value,
        method: CheegerMethod::GridBruteforce,
        witness: Witness::Intervals(intervals),
        grid_resolution: Some(k),
    })
}
