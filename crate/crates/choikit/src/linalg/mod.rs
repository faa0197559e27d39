//! Dense complex matrices with fixed conventions.
//!
//! Everything else in the crate is built on two choices made here:
//!
//! - `vec` flattens row-major, so the standard bilinear form
//!   `<x,y> = sum_ij x_ij y_ij` is a plain transposed dot product with no
//!   conjugation, and `vec(A x B) = (A (x) B^T) vec(x)`.
//! - Composite indices on tensor products follow `row = i * dim_b + a`,
//!   with `i` indexing the first factor and `a` the second.

mod bipartite;

pub(crate) use bipartite::mix_index;
pub use bipartite::{BipartiteOperator, Slot};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix, row-major storage. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::json::MatrixDto", into = "crate::json::MatrixDto")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Dimensions must be positive,
    /// the entry count must match and every entry must be finite.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidData(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidData(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidData("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let entries = (0..rows * cols).map(|idx| f(idx / cols, idx % cols)).collect();
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |i, j| if i == j { ONE } else { ZERO })
    }

    /// Matrix unit e_ij: single 1 at row `i`, column `j`.
    pub fn matrix_unit(dim: usize, i: usize, j: usize) -> Self {
        assert!(i < dim && j < dim);
        Self::from_fn(dim, dim, |r, s| if (r, s) == (i, j) { ONE } else { ZERO })
    }

    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&r| c(r, 0.0)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Row-major flattening. `vec(e_ij)` is the standard basis vector at
    /// index `i * cols + j`, and `<x,y> = vec(x)^T vec(y)` without conjugation.
    pub fn vec(&self) -> Vec<Complex64> {
        self.entries.clone()
    }

    /// Inverse of [`ComplexMatrix::vec`]: exact roundtrip.
    pub fn unvec(rows: usize, cols: usize, v: &[Complex64]) -> Result<Self> {
        Self::new(rows, cols, v.to_vec())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = vec![ZERO; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[i * other.cols + j] += a * other.entries[k * other.cols + j];
                }
            }
        }
        Self { rows: self.rows, cols: other.cols, entries: out }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.entries[i * self.cols + j] * v[j])
                    .sum()
            })
            .collect()
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn fro_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max deviation from Hermiticity, `max_ij |h_ij - conj(h_ji)|`.
    pub fn herm_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub(crate) fn check_hermitian(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian check on non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let dev = self.herm_deviation();
        let threshold = tol::HERM * self.fro_norm().max(1.0);
        if dev > threshold {
            return Err(Error::NotHermitian { deviation: dev, threshold });
        }
        Ok(())
    }

    /// `||self - other|| <= tol * max(1, ||self||)` in Frobenius norm.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.sub(other).fro_norm() <= tol * self.fro_norm().max(1.0)
    }

    pub(crate) fn to_na(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_iterator(self.rows, self.cols, self.entries.iter().cloned())
    }

    pub(crate) fn from_na(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Eigendecomposition of a Hermitian matrix: real eigenvalues sorted
    /// descending and a unitary matrix whose columns are the matching
    /// eigenvectors, `h = V diag(lambda) V*`.
    pub fn hermitian_eig(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        self.check_hermitian()?;
        let eig = self.to_na().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.rows).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors =
            ComplexMatrix::from_fn(self.rows, self.rows, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok((values, vectors))
    }

    /// True iff the min eigenvalue is `>= -tol * max(1, ||h||)`.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        let (values, _) = self.hermitian_eig()?;
        let floor = -tol * self.fro_norm().max(1.0);
        Ok(values.last().is_none_or(|&min| min >= floor))
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let svd = self.to_na().svd(false, false);
        let mut s: Vec<f64> = svd.singular_values.iter().cloned().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Economy SVD `self = U diag(s) V*`, singular values descending.
    /// Returns `(u, s, v_adjoint)`.
    pub fn svd(&self) -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
        let svd = self.to_na().svd(true, true);
        let u = ComplexMatrix::from_na(&svd.u.expect("svd requested u"));
        let vt = ComplexMatrix::from_na(&svd.v_t.expect("svd requested v_t"));
        let s: Vec<f64> = svd.singular_values.iter().cloned().collect();
        (u, s, vt)
    }

    /// Number of singular values above `tol` times the largest one.
    pub fn rank(&self, tol: f64) -> usize {
        let s = self.singular_values();
        match s.first() {
            None | Some(0.0) => 0,
            Some(&smax) => s.iter().filter(|&&v| v > tol * smax).count(),
        }
    }

    /// Inverse via LU; fails when the matrix is numerically singular.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "inverse of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        self.to_na()
            .lu()
            .try_inverse()
            .map(|m| Self::from_na(&m))
            .ok_or(Error::SingularIsomorphism)
    }

    /// Solves `self * X = rhs` via LU.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if !self.is_square() || self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve with {}x{} lhs and {}x{} rhs",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        self.to_na()
            .lu()
            .solve(&rhs.to_na())
            .map(|m| Self::from_na(&m))
            .ok_or(Error::SingularIsomorphism)
    }
}

/// Kronecker product consistent with the composite index convention:
/// `kron(a,b)[(i*p+k), (j*q+l)] = a[i,j] * b[k,l]` for `b` of size p x q.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (p, q) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * p, a.cols() * q, |r, s| {
        a.get(r / p, s / q) * b.get(r % p, s % q)
    })
}

/// Kronecker product of coordinate vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Plain transposed dot product, `sum_i a_i b_i`, no conjugation.
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
