//! Small dense linear algebra: symmetric eigendecomposition, PSD square
//! roots, and reference permanent/determinant evaluators for complex
//! matrices.
//!
//! Fiber blocks never exceed single digits, so a cyclic Jacobi sweep and
//! naive permutation expansions are both exact enough and easy to audit.

use crate::perm::{inversions, permutations};
use crate::{Error, Result, C64};

/// Dense real symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn scaled_identity(n: usize, value: f64) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = value;
        }
        m
    }

    /// Build from rows, enforcing symmetry within `1e-12`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = vec![0.0; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                data[i * n + j] = v;
            }
        }
        for i in 0..n {
            for j in 0..i {
                if (data[i * n + j] - data[j * n + i]).abs() > 1e-12 {
                    return Err(Error::InvalidParameter {
                        name: "matrix",
                        reason: format!("not symmetric at ({i},{j})"),
                    });
                }
            }
        }
        Ok(SymMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    /// Matrix-vector product on complex vectors (extension by linearity).
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..n {
                acc += x[j] * self.data[i * n + j];
            }
            out[i] = acc;
        }
        out
    }

    /// Product `self * other` (result symmetrized only if exact).
    pub fn matmul(&self, other: &SymMatrix) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    /// Eigendecomposition by cyclic Jacobi rotations. Returns
    /// `(eigenvalues, eigenvectors)` with eigenvectors in columns.
    pub fn eigh(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let mut a = self.data.clone();
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        for _sweep in 0..100 {
            let mut off = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    off += a[i * n + j] * a[i * n + j];
                }
            }
            if off <= 1e-30 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let eigenvalues = (0..n).map(|i| a[i * n + i]).collect();
        (eigenvalues, v)
    }

    /// Largest eigenvalue.
    pub fn max_eigenvalue(&self) -> f64 {
        self.eigh().0.into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigh().0.into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Principal square root of a positive semidefinite matrix. Eigenvalues
    /// below `-tol` are rejected; small negatives are clamped to zero.
    pub fn sqrt_psd(&self, tol: f64) -> Result<SymMatrix> {
        let n = self.n;
        let (vals, vecs) = self.eigh();
        let mut out = SymMatrix::zeros(n);
        for (k, &lambda) in vals.iter().enumerate() {
            if lambda < -tol {
                return Err(Error::InvalidParameter {
                    name: "matrix",
                    reason: format!("eigenvalue {lambda} < 0, not positive semidefinite"),
                });
            }
            let root = lambda.max(0.0).sqrt();
            for i in 0..n {
                for j in 0..n {
                    out.data[i * n + j] += root * vecs[i * n + k] * vecs[j * n + k];
                }
            }
        }
        Ok(out)
    }
}

/// Permanent of a complex square matrix by direct permutation expansion.
pub fn permanent(matrix: &[Vec<C64>]) -> C64 {
    let n = matrix.len();
    let mut total = C64::new(0.0, 0.0);
    for pi in permutations(n) {
        let mut prod = C64::new(1.0, 0.0);
        for (i, &j) in pi.iter().enumerate() {
            prod *= matrix[i][j];
        }
        total += prod;
    }
    total
}

/// Determinant of a complex square matrix by signed permutation expansion.
pub fn determinant(matrix: &[Vec<C64>]) -> C64 {
    let n = matrix.len();
    let mut total = C64::new(0.0, 0.0);
    for pi in permutations(n) {
        let sign = if inversions(&pi) % 2 == 0 { 1.0 } else { -1.0 };
        let mut prod = C64::new(sign, 0.0);
        for (i, &j) in pi.iter().enumerate() {
            prod *= matrix[i][j];
        }
        total += prod;
    }
    total
}
