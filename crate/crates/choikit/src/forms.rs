//! Non-degenerate bilinear pairings, duality data, and the constructive
//! basis algorithms.
//!
//! A form is stored through its Gram matrix in the fixed coordinates of
//! `C^d`: `pair(x, y) = x^T gram y`, linear in both slots with no
//! conjugation. Matrix-algebra forms twisted by an isomorphism `sigma` are
//! produced by inverting its transfer matrix, so the vector-space level
//! stays the native representation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, dot, vec_norm, ComplexMatrix, ONE, ZERO};
use crate::maps::{Isomorphism, LinearMapRep};
use crate::tol;

/// Non-degenerate bilinear form on `C^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FormDto", into = "FormDto")]
pub struct BilinearForm {
    dim: usize,
    gram: ComplexMatrix,
}

impl BilinearForm {
    /// Wraps a Gram matrix; rejects non-square or numerically singular input.
    pub fn new(gram: ComplexMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "gram matrix must be square, got {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        let d = gram.rows();
        if gram.rank(tol::RANK) != d {
            return Err(Error::SingularForm(format!(
                "gram matrix has rank {} < {d}",
                gram.rank(tol::RANK)
            )));
        }
        Ok(Self { dim: d, gram })
    }

    /// The standard form `<x,y> = sum_i x_i y_i` (gram = identity).
    pub fn standard(dim: usize) -> Self {
        Self { dim, gram: ComplexMatrix::identity(dim) }
    }

    /// The trace form `<x,y>_t = tr(xy)` on `M_m`; its gram is the
    /// transpose permutation on vec coordinates.
    pub fn trace_form(m: usize) -> Self {
        let d = m * m;
        let gram = ComplexMatrix::from_fn(d, d, |r, s| {
            let (i, j) = (r / m, r % m);
            if s == j * m + i {
                ONE
            } else {
                ZERO
            }
        });
        Self { dim: d, gram }
    }

    /// The form `<x,y>_sigma = <x, sigma^{-1}(y)>` induced by an
    /// isomorphism of `M_m`: gram is the inverse transfer matrix.
    pub fn from_isomorphism(sigma: &Isomorphism) -> Result<Self> {
        let gram = sigma.as_map().transfer().inverse()?;
        Ok(Self { dim: gram.rows(), gram })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &ComplexMatrix {
        &self.gram
    }

    /// `x^T gram y`; bilinear in both slots.
    pub fn pair(&self, x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "pairing on C^{} applied to vectors of length {} and {}",
                self.dim,
                x.len(),
                y.len()
            )));
        }
        Ok(dot(x, &self.gram.mul_vec(y)))
    }

    /// Pairing of matrices through their vec coordinates.
    pub fn pair_matrices(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<Complex64> {
        self.pair(&x.vec(), &y.vec())
    }

    /// True iff the gram matrix is symmetric within relative 1e-10.
    pub fn is_symmetric(&self) -> bool {
        self.gram.approx_eq(&self.gram.transpose(), tol::HERM)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FormDto {
    dim: usize,
    gram: crate::json::MatrixDto,
}

impl From<BilinearForm> for FormDto {
    fn from(f: BilinearForm) -> Self {
        Self { dim: f.dim, gram: f.gram.into() }
    }
}

impl TryFrom<FormDto> for BilinearForm {
    type Error = Error;

    fn try_from(dto: FormDto) -> Result<Self> {
        let gram: ComplexMatrix = dto.gram.try_into()?;
        if gram.rows() != dto.dim {
            return Err(Error::InvalidData(format!(
                "form dim {} does not match gram size {}",
                dto.dim,
                gram.rows()
            )));
        }
        BilinearForm::new(gram)
    }
}

/// A family of `d` coordinate vectors spanning `C^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::json::BasisDto", into = "crate::json::BasisDto")]
pub struct BasisFamily {
    dim: usize,
    elements: Vec<Vec<Complex64>>,
}

impl BasisFamily {
    pub fn new(elements: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = elements.len();
        if d == 0 {
            return Err(Error::SingularBasis("empty family".into()));
        }
        if elements.iter().any(|e| e.len() != d) {
            return Err(Error::SingularBasis(format!(
                "a basis of C^{d} needs {d} vectors of length {d}"
            )));
        }
        let family = Self { dim: d, elements };
        let stacked = family.stack_rows();
        if stacked.rank(tol::RANK) != d {
            return Err(Error::SingularBasis(format!(
                "stacked family has rank {} < {d}",
                stacked.rank(tol::RANK)
            )));
        }
        Ok(family)
    }

    /// The vec'd matrix units of `M_m` in row-major order.
    pub fn matrix_units(m: usize) -> Self {
        let d = m * m;
        let elements = (0..d)
            .map(|k| (0..d).map(|i| if i == k { ONE } else { ZERO }).collect())
            .collect();
        Self { dim: d, elements }
    }

    /// Matrix units with swapped indices, `{e_ji}` ordered by `(i,j)`.
    pub fn matrix_units_swapped(m: usize) -> Self {
        let d = m * m;
        let elements = (0..d)
            .map(|k| {
                let (i, j) = (k / m, k % m);
                let target = j * m + i;
                (0..d).map(|t| if t == target { ONE } else { ZERO }).collect()
            })
            .collect();
        Self { dim: d, elements }
    }

    /// The 2x2 Weyl basis: (I, diag(1,-1), offdiag(1,1), offdiag(-1;1)),
    /// all divided by sqrt(2).
    pub fn weyl2() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mats = [
            [r, 0.0, 0.0, r],
            [r, 0.0, 0.0, -r],
            [0.0, r, r, 0.0],
            [0.0, -r, r, 0.0],
        ];
        let elements = mats
            .iter()
            .map(|row| row.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self { dim: 4, elements }
    }

    /// The Pauli family `{E1, E2, E3, iE4}` (equal to I, Z, X, Y over sqrt 2),
    /// which is orthonormal for the trace form on `M_2`.
    pub fn pauli2() -> Self {
        let mut elements: Vec<Vec<Complex64>> = Self::weyl2().elements;
        elements[3] = elements[3].iter().map(|z| z * c(0.0, 1.0)).collect();
        Self { dim: 4, elements }
    }

    pub fn from_matrices(mats: &[ComplexMatrix]) -> Result<Self> {
        Self::new(mats.iter().map(|m| m.vec()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn element(&self, i: usize) -> &[Complex64] {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Vec<Complex64>] {
        &self.elements
    }

    /// Matrix with `e_i^T` as row `i`.
    pub fn stack_rows(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, self.dim, |i, j| self.elements[i][j])
    }

    /// Matrix with `e_j` as column `j`.
    pub fn stack_cols(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, self.dim, |i, j| self.elements[j][i])
    }
}

/// The unique form with `pair(e_i, f_j) = delta_ij`: the Gram matrix solves
/// `E G F = I` for `E` stacking `e` as rows and `F` stacking `f` as columns,
/// so `G = (F E)^{-1}`.
pub fn form_from_basis_pair(e: &BasisFamily, f: &BasisFamily) -> Result<BilinearForm> {
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch(format!(
            "basis families of dims {} and {}",
            e.dim(),
            f.dim()
        )));
    }
    let gram = f
        .stack_cols()
        .mul(&e.stack_rows())
        .inverse()
        .map_err(|_| Error::SingularBasis("basis pair does not determine a form".into()))?;
    BilinearForm::new(gram)
}

/// For a basis `e`, the unique `f` with `pair(e_i, f_j) = delta_ij`,
/// obtained by solving `(E G) F = I`.
pub fn dual_basis(form: &BilinearForm, e: &BasisFamily) -> Result<BasisFamily> {
    if e.dim() != form.dim() {
        return Err(Error::DimensionMismatch(format!(
            "basis of dim {} against form of dim {}",
            e.dim(),
            form.dim()
        )));
    }
    let f_cols = e
        .stack_rows()
        .mul(form.gram())
        .inverse()
        .map_err(|_| Error::SingularBasis("dual basis solve failed".into()))?;
    let d = form.dim();
    BasisFamily::new((0..d).map(|j| (0..d).map(|i| f_cols.get(i, j)).collect()).collect())
}

/// `||gram_a - gram_b|| <= tol * max(1, ||gram_a||)`.
pub fn forms_equal(a: &BilinearForm, b: &BilinearForm, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "forms of dims {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.gram().approx_eq(b.gram(), tol))
}

/// Builds a basis `{e_i}` with `pair(e_i, e_j) = delta_ij` for a symmetric
/// non-degenerate form, by induction on the orthogonal complement: pick the
/// candidate with the largest normalized self-pairing (plain complement
/// vectors and polarization sums `v + w` both compete), normalize by the
/// principal complex square root, deflate, recurse.
pub fn orthonormalize_symmetric(form: &BilinearForm) -> Result<BasisFamily> {
    if !form.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let d = form.dim();
    let scale = form.gram().fro_norm().max(1.0);
    let mut complement: Vec<Vec<Complex64>> =
        (0..d).map(|k| (0..d).map(|i| if i == k { ONE } else { ZERO }).collect()).collect();
    let mut output: Vec<Vec<Complex64>> = Vec::with_capacity(d);

    for step in 0..d {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        let mut consider = |v: Vec<Complex64>| -> Result<()> {
            let nsq = vec_norm(&v).powi(2);
            if nsq == 0.0 {
                return Ok(());
            }
            let ratio = form.pair(&v, &v)?.norm() / nsq;
            if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
                best = Some((ratio, v));
            }
            Ok(())
        };
        for v in &complement {
            consider(v.clone())?;
        }
        for i in 0..complement.len() {
            for j in i + 1..complement.len() {
                let sum = complement[i].iter().zip(&complement[j]).map(|(a, b)| a + b).collect();
                consider(sum)?;
            }
        }
        let (ratio, mut pivot) = best.ok_or(Error::NumericalBreakdown(0.0))?;
        if ratio < tol::BREAKDOWN * scale {
            return Err(Error::NumericalBreakdown(ratio));
        }
        // scrub drift along the vectors produced so far (twice is enough),
        // then normalize by the principal branch square root
        for _ in 0..2 {
            for e in &output {
                let coeff = form.pair(&pivot, e)?;
                for (p, b) in pivot.iter_mut().zip(e) {
                    *p -= coeff * b;
                }
            }
        }
        let root = form.pair(&pivot, &pivot)?.sqrt();
        let e: Vec<Complex64> = pivot.iter().map(|z| z / root).collect();
        output.push(e);

        // deflate the complement against every output vector; the repeated
        // pass keeps the accumulated projection error at rounding level
        let mut deflated = complement;
        for _ in 0..2 {
            for u in &mut deflated {
                for e in &output {
                    let coeff = form.pair(u, e)?;
                    for (x, b) in u.iter_mut().zip(e) {
                        *x -= coeff * b;
                    }
                }
            }
        }

        let target = d - step - 1;
        if target > 0 {
            complement = euclidean_span_basis(&deflated, target);
        } else {
            complement = Vec::new();
        }
    }
    BasisFamily::new(output)
}

/// Euclidean-orthonormal basis of the span of `vectors`, truncated to
/// `target` directions (dominant left singular vectors).
fn euclidean_span_basis(vectors: &[Vec<Complex64>], target: usize) -> Vec<Vec<Complex64>> {
    let d = vectors[0].len();
    let stacked = ComplexMatrix::from_fn(d, vectors.len(), |i, j| vectors[j][i]);
    let (u, _, _) = stacked.svd();
    (0..target).map(|j| (0..d).map(|i| u.get(i, j)).collect()).collect()
}

/// The map `sigma^T` defined by `<sigma^T(x), y> = <x, sigma(y)>` for the
/// standard form: its transfer matrix is the transpose.
pub fn sigma_transpose(sigma: &LinearMapRep) -> LinearMapRep {
    sigma.adjoint()
}

/// Product form on `M_p (x) M_q` from forms on the factors:
/// `<x1 (x) y1, x2 (x) y2> = <x1,x2>_a <y1,y2>_b` re-indexed to the
/// composite vec convention.
pub fn tensor_form(a: &BilinearForm, b: &BilinearForm, p: usize, q: usize) -> Result<BilinearForm> {
    if a.dim() != p * p || b.dim() != q * q {
        return Err(Error::DimensionMismatch(format!(
            "tensor_form needs forms on M_{p} and M_{q}, got dims {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let d = p * q * p * q;
    let mut gram = vec![ZERO; d * d];
    let (ga, gb) = (a.gram(), b.gram());
    for r1 in 0..p * p {
        for c1 in 0..p * p {
            let za = ga.get(r1, c1);
            if za == ZERO {
                continue;
            }
            for r2 in 0..q * q {
                for c2 in 0..q * q {
                    let zb = gb.get(r2, c2);
                    if zb == ZERO {
                        continue;
                    }
                    let row = crate::linalg::mix_index(p, q, r1 * q * q + r2);
                    let col = crate::linalg::mix_index(p, q, c1 * q * q + c2);
                    gram[row * d + col] = za * zb;
                }
            }
        }
    }
    BilinearForm::new(ComplexMatrix::new(d, d, gram)?)
}
