//! Operators on a tensor product of two matrix algebras.

use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Which tensor factor an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
}

/// Element of `M_m (x) M_n` with dimension metadata.
///
/// Composite index convention: row index `i * dim_b + a`, where `i` indexes
/// the first factor and `a` the second.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::json::BipartiteDto", into = "crate::json::BipartiteDto")]
pub struct BipartiteOperator {
    dim_a: usize,
    dim_b: usize,
    matrix: ComplexMatrix,
}

impl BipartiteOperator {
    pub fn new(dim_a: usize, dim_b: usize, matrix: ComplexMatrix) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::InvalidData("bipartite dimensions must be positive".into()));
        }
        let d = dim_a * dim_b;
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "bipartite operator on M_{dim_a} (x) M_{dim_b} needs a {d}x{d} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { dim_a, dim_b, matrix })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Entry at composite indices `((i,a), (j,b))`.
    pub fn get(&self, i: usize, a: usize, j: usize, b: usize) -> num_complex::Complex64 {
        self.matrix.get(i * self.dim_b + a, j * self.dim_b + b)
    }

    /// Transposes the chosen tensor slot. Involution; doing both slots in
    /// sequence equals the global transpose.
    pub fn partial_transpose(&self, slot: Slot) -> Self {
        let (m, n) = (self.dim_a, self.dim_b);
        let matrix = ComplexMatrix::from_fn(m * n, m * n, |r, s| {
            let (i, a) = (r / n, r % n);
            let (j, b) = (s / n, s % n);
            match slot {
                Slot::First => self.get(j, a, i, b),
                Slot::Second => self.get(i, b, j, a),
            }
        });
        Self { dim_a: m, dim_b: n, matrix }
    }

    /// Exchanges the tensor factors: `flip(a (x) b) = b (x) a` extended
    /// linearly. Output lives on `M_n (x) M_m`.
    pub fn flip(&self) -> Self {
        let (m, n) = (self.dim_a, self.dim_b);
        let matrix = ComplexMatrix::from_fn(m * n, m * n, |r, s| {
            let (a, i) = (r / m, r % m);
            let (b, j) = (s / m, s % m);
            self.get(i, a, j, b)
        });
        Self { dim_a: n, dim_b: m, matrix }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim_a == other.dim_a
            && self.dim_b == other.dim_b
            && self.matrix.approx_eq(&other.matrix, tol)
    }
}

/// Mixed-index permutation relating `vec(x) (x) vec(y)` to `vec(x (x) y)`.
///
/// For `x` in M_p and `y` in M_q, the source index `(i*p+j)*q^2 + (a*q+b)`
/// maps to the composite index `(i*q+a)*(p*q) + (j*q+b)`.
pub(crate) fn mix_index(p: usize, q: usize, src: usize) -> usize {
    let xy = src / (q * q);
    let ab = src % (q * q);
    let (i, j) = (xy / p, xy % p);
    let (a, b) = (ab / q, ab % q);
    (i * q + a) * (p * q) + (j * q + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, kron, kron_vec, ComplexMatrix, ONE, ZERO};

    fn choi_of_identity(m: usize) -> BipartiteOperator {
        let mut acc = ComplexMatrix::zeros(m * m, m * m);
        for i in 0..m {
            for j in 0..m {
                let e = ComplexMatrix::matrix_unit(m, i, j);
                acc = acc.add(&kron(&e, &e));
            }
        }
        BipartiteOperator::new(m, m, acc).unwrap()
    }

    fn swap(m: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(m * m, m * m, |r, s| {
            let (i, a) = (r / m, r % m);
            let (j, b) = (s / m, s % m);
            if i == b && j == a {
                ONE
            } else {
                ZERO
            }
        })
    }

    #[test]
    fn partial_transpose_on_products() {
        let a = ComplexMatrix::new(2, 2, vec![c(1.0, 2.0), c(0.0, 1.0), c(3.0, 0.0), c(0.5, -1.0)]).unwrap();
        let b = ComplexMatrix::new(3, 3, (0..9).map(|k| c(k as f64, -(k as f64))).collect()).unwrap();
        let x = BipartiteOperator::new(2, 3, kron(&a, &b)).unwrap();
        let pt2 = x.partial_transpose(Slot::Second);
        assert!(pt2.matrix().approx_eq(&kron(&a, &b.transpose()), 0.0));
        let pt1 = x.partial_transpose(Slot::First);
        assert!(pt1.matrix().approx_eq(&kron(&a.transpose(), &b), 0.0));
    }

    #[test]
    fn partial_transpose_of_choi_identity_is_swap() {
        // Direct sum oracle: sum_ij e_ji (x) e_ij computed entrywise.
        let c_id = choi_of_identity(3);
        let pt = c_id.partial_transpose(Slot::First);
        assert!(pt.matrix().approx_eq(&swap(3), 0.0));
    }

    #[test]
    fn partial_transpose_involution_exact() {
        let x = BipartiteOperator::new(
            2,
            2,
            ComplexMatrix::from_fn(4, 4, |i, j| c(i as f64 + 0.25, j as f64 - 1.5)),
        )
        .unwrap();
        for slot in [Slot::First, Slot::Second] {
            assert_eq!(x.partial_transpose(slot).partial_transpose(slot), x);
        }
        let both = x.partial_transpose(Slot::First).partial_transpose(Slot::Second);
        assert_eq!(both.matrix(), &x.matrix().transpose());
    }

    #[test]
    fn flip_on_products() {
        let e12 = ComplexMatrix::matrix_unit(2, 0, 1);
        let i3 = ComplexMatrix::identity(3);
        let x = BipartiteOperator::new(2, 3, kron(&e12, &i3)).unwrap();
        let f = x.flip();
        assert_eq!(f.dim_a(), 3);
        assert_eq!(f.dim_b(), 2);
        assert!(f.matrix().approx_eq(&kron(&i3, &e12), 0.0));
    }

    #[test]
    fn flip_fixes_choi_identity_and_is_involutive() {
        let c_id = choi_of_identity(2);
        assert_eq!(c_id.flip(), c_id);
        let x = BipartiteOperator::new(
            2,
            2,
            ComplexMatrix::from_fn(4, 4, |i, j| c(1.0 + i as f64, j as f64)),
        )
        .unwrap();
        assert_eq!(x.flip().flip(), x);
    }

    #[test]
    fn mix_index_matches_kron_of_vecs() {
        let x = ComplexMatrix::from_fn(2, 2, |i, j| c((2 * i + j) as f64, 1.0));
        let y = ComplexMatrix::from_fn(3, 3, |i, j| c(0.5, (3 * i + j) as f64));
        let composite = kron(&x, &y).vec();
        let mixed = kron_vec(&x.vec(), &y.vec());
        for (src, &v) in mixed.iter().enumerate() {
            assert_eq!(composite[mix_index(2, 3, src)], v);
        }
    }
}
