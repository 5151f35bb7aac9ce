//! Dense symmetric eigensolver for the random-matrix experiment: cyclic
//! Jacobi rotations on a packed upper triangle, self-contained and stable
//! for entries with a large dynamic range.

use crate::error::{Error, Result};
use crate::report::{BoundReport, Relation};
use serde_json::json;

/// Symmetric matrix stored as its upper triangle, row-major, diagonal
/// included. Symmetry holds by construction.
#[derive(Debug, Clone)]
pub struct SymMatrix {
    n: usize,
    upper: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Result<SymMatrix> {
        if n == 0 {
            return Err(Error::domain("matrix order must be >= 1"));
        }
        Ok(SymMatrix {
            n,
            upper: vec![0.0; n * (n + 1) / 2],
        })
    }

    /// Build from `f(i, j)` called once per upper-triangle entry (i <= j),
    /// row-major: (0,0), (0,1), ..., (1,1), (1,2), ...
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<SymMatrix> {
        let mut m = SymMatrix::zeros(n)?;
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of stored entries, n(n+1)/2.
    pub fn packed_len(&self) -> usize {
        self.upper.len()
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.upper[k] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Squared Frobenius norm (both triangles plus diagonal).
    pub fn frobenius_squared(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                s += v * v;
            }
        }
        s
    }
}

#[allow(clippy::needless_range_loop)]
fn off_diagonal_norm(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

/// All eigenvalues, sorted descending (ties kept adjacent in input order),
/// via cyclic Jacobi sweeps run until the off-diagonal Frobenius norm
/// drops below `1e-12 * ||A||_F`. The off-diagonal norm must decrease
/// across sweeps; a non-decreasing sweep aborts with an error.
#[allow(clippy::needless_range_loop)] // index arithmetic mirrors the rotation formulas
pub fn eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    if m.upper.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    let n = m.order();
    if n == 1 {
        return Ok(vec![m.get(0, 0)]);
    }

    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect();

    let norm = m.frobenius_squared().sqrt();
    let target = 1e-12 * norm.max(f64::MIN_POSITIVE);
    let mut off = off_diagonal_norm(&a);

    const MAX_SWEEPS: usize = 64;
    let mut sweeps = 0;
    while off > target {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::numeric(format!(
                "jacobi did not converge in {MAX_SWEEPS} sweeps (off = {off:.3e})"
            )));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                // rotation angle that annihilates a[p][q]
                let theta = 0.5 * (a[q][q] - a[p][p]) / apq;
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let s = if theta >= 0.0 { 1.0 } else { -1.0 };
                    s / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                let app = a[p][p];
                let aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = akp - s * (akq + tau * akp);
                        a[p][k] = a[k][p];
                        a[k][q] = akq + s * (akp - tau * akq);
                        a[q][k] = a[k][q];
                    }
                }
            }
        }
        let new_off = off_diagonal_norm(&a);
        if new_off >= off && new_off > target {
            return Err(Error::numeric(
                "jacobi sweep failed to reduce the off-diagonal norm",
            ));
        }
        off = new_off;
        sweeps += 1;
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(eig)
}

/// Check the eigenvalue stability inequality
/// `sum_i |l_i - l'_i|^2 <= sum_{i,j} |A_ij - B_ij|^2`
/// for sorted spectra of two symmetric matrices of the same order.
pub fn eigenvalue_stability_check(a: &SymMatrix, b: &SymMatrix) -> Result<BoundReport> {
    if a.order() != b.order() {
        return Err(Error::domain(format!(
            "order mismatch: {} vs {}",
            a.order(),
            b.order()
        )));
    }
    let la = eigenvalues(a)?;
    let lb = eigenvalues(b)?;
    let lhs: f64 = la.iter().zip(&lb).map(|(x, y)| (x - y) * (x - y)).sum();
    let mut rhs = 0.0;
    for i in 0..a.order() {
        for j in 0..a.order() {
            let d = a.get(i, j) - b.get(i, j);
            rhs += d * d;
        }
    }
    Ok(BoundReport::exact(
        format!("eigenvalue-stability[n={}]", a.order()),
        Relation::UpperBound,
        lhs,
        rhs,
        json!({"order": a.order()}),
    ))
}
