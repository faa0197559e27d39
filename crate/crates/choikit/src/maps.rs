//! Linear maps between matrix algebras as transfer matrices, the Choi
//! transform variants, adjoints, and the identity engine.
//!
//! A map `phi: M_m -> M_n` is carried by its transfer matrix `L` of size
//! `n^2 x m^2` acting on vec coordinates, `vec(phi(x)) = L vec(x)`.
//! Composition is then plain multiplication and the Choi transforms are
//! honest changes of representation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{tensor_form, BasisFamily, BilinearForm};
use crate::linalg::{dot, kron, kron_vec, mix_index, BipartiteOperator, ComplexMatrix};
use crate::tol;

/// A linear map `M_m -> M_n` in transfer-matrix representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::json::MapDto", into = "crate::json::MapDto")]
pub struct LinearMapRep {
    dim_in: usize,
    dim_out: usize,
    transfer: ComplexMatrix,
}

impl LinearMapRep {
    pub fn new(dim_in: usize, dim_out: usize, transfer: ComplexMatrix) -> Result<Self> {
        if transfer.rows() != dim_out * dim_out || transfer.cols() != dim_in * dim_in {
            return Err(Error::DimensionMismatch(format!(
                "map M_{dim_in} -> M_{dim_out} needs a {}x{} transfer, got {}x{}",
                dim_out * dim_out,
                dim_in * dim_in,
                transfer.rows(),
                transfer.cols()
            )));
        }
        Ok(Self { dim_in, dim_out, transfer })
    }

    /// Builds a map from its action on matrix units.
    pub fn from_action(
        dim_in: usize,
        dim_out: usize,
        action: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    ) -> Self {
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim_in * dim_in);
        for i in 0..dim_in {
            for j in 0..dim_in {
                let y = action(&ComplexMatrix::matrix_unit(dim_in, i, j));
                assert_eq!((y.rows(), y.cols()), (dim_out, dim_out));
                cols.push(y.vec());
            }
        }
        let transfer = ComplexMatrix::from_fn(dim_out * dim_out, dim_in * dim_in, |r, c| cols[c][r]);
        Self { dim_in, dim_out, transfer }
    }

    pub fn identity(m: usize) -> Self {
        Self { dim_in: m, dim_out: m, transfer: ComplexMatrix::identity(m * m) }
    }

    /// The transpose map `t: x -> x^T`; its transfer is the vec-permutation
    /// swapping row and column indices.
    pub fn transpose_map(m: usize) -> Self {
        Self::from_action(m, m, |x| x.transpose())
    }

    /// `Ad_s: x -> s* x s`. With the row-major vec convention the transfer
    /// is `kron(s*, s^T)`.
    pub fn ad(s: &ComplexMatrix) -> Result<Self> {
        if !s.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Ad_s needs square s, got {}x{}",
                s.rows(),
                s.cols()
            )));
        }
        let m = s.rows();
        Ok(Self { dim_in: m, dim_out: m, transfer: kron(&s.adjoint(), &s.transpose()) })
    }

    /// The completely depolarizing map `x -> tr(x) I / m`.
    pub fn depolarizing(m: usize) -> Self {
        let scale = crate::linalg::c(1.0 / m as f64, 0.0);
        Self::from_action(m, m, |x| ComplexMatrix::identity(m).scale(x.trace() * scale))
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn transfer(&self) -> &ComplexMatrix {
        &self.transfer
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim_in || x.cols() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "map on M_{} applied to {}x{} matrix",
                self.dim_in,
                x.rows(),
                x.cols()
            )));
        }
        ComplexMatrix::unvec(self.dim_out, self.dim_out, &self.transfer.mul_vec(&x.vec()))
    }

    /// `self` after `inner`: transfer matrices multiply.
    pub fn compose(&self, inner: &LinearMapRep) -> Result<LinearMapRep> {
        if self.dim_in != inner.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "compose: M_{} -> M_{} after M_{} -> M_{}",
                self.dim_in, self.dim_out, inner.dim_in, inner.dim_out
            )));
        }
        Ok(LinearMapRep {
            dim_in: inner.dim_in,
            dim_out: self.dim_out,
            transfer: self.transfer.mul(&inner.transfer),
        })
    }

    /// Tensor product acting on `M_{m1 m2}` with the composite index
    /// convention. The kron of the factor transfers acts on
    /// `vec (x) vec` coordinates, so both sides are conjugated by the
    /// mixed-index permutation.
    pub fn tensor(&self, other: &LinearMapRep) -> LinearMapRep {
        let (m1, n1) = (self.dim_in, self.dim_out);
        let (m2, n2) = (other.dim_in, other.dim_out);
        let rows = (n1 * n2) * (n1 * n2);
        let cols = (m1 * m2) * (m1 * m2);
        let mut transfer = vec![crate::linalg::ZERO; rows * cols];
        for r1 in 0..n1 * n1 {
            for c1 in 0..m1 * m1 {
                let a = self.transfer.get(r1, c1);
                if a == crate::linalg::ZERO {
                    continue;
                }
                for r2 in 0..n2 * n2 {
                    for c2 in 0..m2 * m2 {
                        let b = other.transfer.get(r2, c2);
                        if b == crate::linalg::ZERO {
                            continue;
                        }
                        let row = mix_index(n1, n2, r1 * n2 * n2 + r2);
                        let col = mix_index(m1, m2, c1 * m2 * m2 + c2);
                        transfer[row * cols + col] = a * b;
                    }
                }
            }
        }
        LinearMapRep {
            dim_in: m1 * m2,
            dim_out: n1 * n2,
            transfer: ComplexMatrix::new(rows, cols, transfer).expect("tensor transfer"),
        }
    }

    /// The adjoint for the standard forms `tr(x y^T)` on both ends. With
    /// the row-major vec convention its transfer is the plain transpose.
    pub fn adjoint(&self) -> LinearMapRep {
        LinearMapRep {
            dim_in: self.dim_out,
            dim_out: self.dim_in,
            transfer: self.transfer.transpose(),
        }
    }

    /// The Choi matrix `C_phi = sum_ij e_ij (x) phi(e_ij)`.
    pub fn choi(&self) -> BipartiteOperator {
        let (m, n) = (self.dim_in, self.dim_out);
        let matrix = ComplexMatrix::from_fn(m * n, m * n, |r, s| {
            let (i, a) = (r / n, r % n);
            let (j, b) = (s / n, s % n);
            self.transfer.get(a * n + b, i * m + j)
        });
        BipartiteOperator::new(m, n, matrix).expect("choi dims")
    }

    /// The twisted Choi matrix `C^sigma_phi = C_{phi o sigma}`.
    pub fn choi_sigma(&self, sigma: &Isomorphism) -> Result<BipartiteOperator> {
        Ok(self.compose(sigma.as_map())?.choi())
    }

    pub fn approx_eq(&self, other: &LinearMapRep, tol: f64) -> bool {
        self.dim_in == other.dim_in
            && self.dim_out == other.dim_out
            && self.transfer.approx_eq(&other.transfer, tol)
    }
}

/// An invertible map from a matrix algebra to itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::json::MapDto", into = "crate::json::MapDto")]
pub struct Isomorphism {
    map: LinearMapRep,
}

impl Isomorphism {
    pub fn new(map: LinearMapRep) -> Result<Self> {
        if map.dim_in != map.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "isomorphism must be square, got M_{} -> M_{}",
                map.dim_in, map.dim_out
            )));
        }
        let d = map.dim_in * map.dim_in;
        if map.transfer.rank(tol::RANK) != d {
            return Err(Error::SingularIsomorphism);
        }
        Ok(Self { map })
    }

    pub fn identity(m: usize) -> Self {
        Self { map: LinearMapRep::identity(m) }
    }

    pub fn transpose(m: usize) -> Self {
        Self { map: LinearMapRep::transpose_map(m) }
    }

    /// `Ad_s` for nonsingular `s`.
    pub fn ad(s: &ComplexMatrix) -> Result<Self> {
        if s.is_square() && s.rank(tol::RANK) != s.rows() {
            return Err(Error::SingularS);
        }
        Self::new(LinearMapRep::ad(s)?)
    }

    pub fn dim(&self) -> usize {
        self.map.dim_in
    }

    pub fn as_map(&self) -> &LinearMapRep {
        &self.map
    }

    pub fn inverse(&self) -> Result<Isomorphism> {
        let transfer = self.map.transfer.inverse()?;
        Ok(Self {
            map: LinearMapRep { dim_in: self.map.dim_in, dim_out: self.map.dim_out, transfer },
        })
    }
}

impl From<Isomorphism> for LinearMapRep {
    fn from(iso: Isomorphism) -> Self {
        iso.map
    }
}

/// `(psi1 (x) psi2)(X)` for a bipartite operator `X` on the matching dims.
pub fn apply_tensor(
    psi1: &LinearMapRep,
    psi2: &LinearMapRep,
    x: &BipartiteOperator,
) -> Result<BipartiteOperator> {
    if x.dim_a() != psi1.dim_in() || x.dim_b() != psi2.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "apply_tensor: operator on M_{} (x) M_{} against maps on M_{} and M_{}",
            x.dim_a(),
            x.dim_b(),
            psi1.dim_in(),
            psi2.dim_in()
        )));
    }
    let big = psi1.tensor(psi2);
    let out = big.apply(x.matrix())?;
    BipartiteOperator::new(psi1.dim_out(), psi2.dim_out(), out)
}

/// `Gamma(phi) = sum_i unvec(e_i) (x) phi(unvec(f_i))` for basis families
/// of `M_m` coordinates.
pub fn gamma(phi: &LinearMapRep, e: &BasisFamily, f: &BasisFamily) -> Result<BipartiteOperator> {
    let m = phi.dim_in();
    let n = phi.dim_out();
    if e.dim() != m * m || f.dim() != m * m {
        return Err(Error::SingularBasis(format!(
            "gamma on M_{m} needs families of dim {}, got {} and {}",
            m * m,
            e.dim(),
            f.dim()
        )));
    }
    let mut acc = ComplexMatrix::zeros(m * n, m * n);
    for i in 0..e.dim() {
        let ei = ComplexMatrix::unvec(m, m, e.element(i))?;
        let fi = ComplexMatrix::unvec(m, m, f.element(i))?;
        acc = acc.add(&kron(&ei, &phi.apply(&fi)?));
    }
    BipartiteOperator::new(m, n, acc)
}

/// Vector-space-level `Gamma`: for a map `C^d -> C^{d'}` given by a matrix,
/// returns `sum_i e_i (x) (M f_i)` as a coordinate vector of length `d d'`.
pub fn gamma_vector(map: &ComplexMatrix, e: &BasisFamily, f: &BasisFamily) -> Result<Vec<Complex64>> {
    if e.dim() != map.cols() || f.dim() != map.cols() {
        return Err(Error::DimensionMismatch(format!(
            "gamma_vector: map with {} columns against families of dim {} and {}",
            map.cols(),
            e.dim(),
            f.dim()
        )));
    }
    let mut acc = vec![crate::linalg::ZERO; e.dim() * map.rows()];
    for i in 0..e.dim() {
        let image = map.mul_vec(f.element(i));
        for (idx, v) in kron_vec(e.element(i), &image).into_iter().enumerate() {
            acc[idx] += v;
        }
    }
    Ok(acc)
}

/// Recovers `phi` from `C = Gamma(phi)` for the form behind `Gamma`:
/// the `(i,j)` block of `C` is `phi(unvec(f_k))` for the dual basis, so the
/// transfer solves `L F = B` with `F = gram^{-1}`, i.e. `L = B gram`.
pub fn inverse_choi(c: &BipartiteOperator, form: &BilinearForm) -> Result<LinearMapRep> {
    let (m, n) = (c.dim_a(), c.dim_b());
    if form.dim() != m * m {
        return Err(Error::SingularForm(format!(
            "inverse_choi on M_{m} (x) M_{n} needs a form of dim {}, got {}",
            m * m,
            form.dim()
        )));
    }
    let blocks = ComplexMatrix::from_fn(n * n, m * m, |r, s| {
        let (a, b) = (r / n, r % n);
        let (i, j) = (s / m, s % m);
        c.get(i, a, j, b)
    });
    LinearMapRep::new(m, n, blocks.mul(form.gram()))
}

/// The adjoint `phi^{*_{sigma,tau}} = sigma o phi^* o tau^{-1}` for forms
/// twisted by isomorphisms on the domain and codomain.
pub fn adjoint_general(
    phi: &LinearMapRep,
    sigma: &Isomorphism,
    tau: &Isomorphism,
) -> Result<LinearMapRep> {
    if sigma.dim() != phi.dim_in() || tau.dim() != phi.dim_out() {
        return Err(Error::DimensionMismatch(format!(
            "adjoint_general: map M_{} -> M_{} with sigma on M_{} and tau on M_{}",
            phi.dim_in(),
            phi.dim_out(),
            sigma.dim(),
            tau.dim()
        )));
    }
    let tau_inv = tau.inverse()?;
    sigma.as_map().compose(&phi.adjoint().compose(tau_inv.as_map())?)
}

/// The bilinear pairing on mapping space, `<phi, psi> = <C_phi, C_psi>`
/// for the standard form on `M_m (x) M_n`.
pub fn pairing(phi: &LinearMapRep, psi: &LinearMapRep) -> Result<Complex64> {
    if phi.dim_in() != psi.dim_in() || phi.dim_out() != psi.dim_out() {
        return Err(Error::DimensionMismatch(format!(
            "pairing of M_{} -> M_{} with M_{} -> M_{}",
            phi.dim_in(),
            phi.dim_out(),
            psi.dim_in(),
            psi.dim_out()
        )));
    }
    Ok(dot(&phi.choi().matrix().vec(), &psi.choi().matrix().vec()))
}

/// One identity check: a named residual against a tolerance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn new(name: &str, residual: f64, tol: f64) -> Self {
        Self { name: name.to_string(), residual, tol, pass: residual <= tol }
    }
}

/// Outcome of a batch of identity checks on one instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

impl IdentityReport {
    pub fn from_checks(checks: Vec<IdentityCheck>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self { checks, pass }
    }
}

fn rel_residual(lhs: &ComplexMatrix, rhs: &ComplexMatrix) -> f64 {
    lhs.sub(rhs).fro_norm() / lhs.fro_norm().max(1.0)
}

/// Verifies that `psi1 (x) psi2` sends `C^{sigma1}_phi` to `C^{tau1}_Phi`
/// with `Phi = psi2 o phi o psi1^{*_{sigma1,tau1}}`.
pub fn verify_prop52(
    psi1: &LinearMapRep,
    psi2: &LinearMapRep,
    phi: &LinearMapRep,
    sigma1: &Isomorphism,
    tau1: &Isomorphism,
) -> Result<IdentityReport> {
    if phi.dim_in() != psi1.dim_in() || phi.dim_out() != psi2.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "tensor-push: phi M_{} -> M_{} against psi1 on M_{} and psi2 on M_{}",
            phi.dim_in(),
            phi.dim_out(),
            psi1.dim_in(),
            psi2.dim_in()
        )));
    }
    let twisted_adjoint = adjoint_general(psi1, sigma1, tau1)?;
    let big_phi = psi2.compose(&phi.compose(&twisted_adjoint)?)?;
    let lhs = apply_tensor(psi1, psi2, &phi.choi_sigma(sigma1)?)?;
    let rhs = big_phi.choi_sigma(tau1)?;
    let residual = rel_residual(lhs.matrix(), rhs.matrix());
    Ok(IdentityReport::from_checks(vec![IdentityCheck::new(
        "tensor_push",
        residual,
        tol::CHAIN,
    )]))
}

/// Runs every comparison row between the standard-form and trace-form Choi
/// conventions on one map, with the supplied probe matrices for the scalar
/// pairing row.
pub fn table1_suite(
    phi: &LinearMapRep,
    probe_x: &ComplexMatrix,
    probe_y: &ComplexMatrix,
) -> Result<IdentityReport> {
    let (m, n) = (phi.dim_in(), phi.dim_out());
    if probe_x.rows() != n || !probe_x.is_square() || probe_y.rows() != m || !probe_y.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "table1 probes must live on M_{n} and M_{m}"
        )));
    }
    let t_m = Isomorphism::transpose(m);
    let t_n = Isomorphism::transpose(n);
    let phi_adj = phi.adjoint();
    // phi^star = t o phi^* o t, the adjoint for the trace forms
    let phi_star = adjoint_general(phi, &t_m, &t_n)?;
    let choi_phi = phi.choi();
    let choi_adj = phi_adj.choi();
    let choi_t_phi = phi.choi_sigma(&t_m)?;
    let choi_t_star = phi_star.choi_sigma(&t_n)?;

    let mut checks = Vec::new();

    // (t (x) id)(C_phi) = C^t_phi
    let lhs = apply_tensor(t_m.as_map(), &LinearMapRep::identity(n), &choi_phi)?;
    checks.push(IdentityCheck::new(
        "partial_transpose_is_trace_choi",
        rel_residual(lhs.matrix(), choi_t_phi.matrix()),
        tol::IDENTITY,
    ));

    // t o phi^* o t = phi^star
    let composed = t_m.as_map().compose(&phi_adj.compose(t_n.as_map())?)?;
    checks.push(IdentityCheck::new(
        "trace_adjoint_composition",
        rel_residual(composed.transfer(), phi_star.transfer()),
        tol::IDENTITY,
    ));

    // C_{phi^*} = flip(C_phi)
    checks.push(IdentityCheck::new(
        "choi_of_adjoint_is_flip",
        rel_residual(choi_adj.matrix(), choi_phi.flip().matrix()),
        tol::IDENTITY,
    ));

    // C^t_{phi^star} = flip(C^t_phi)
    checks.push(IdentityCheck::new(
        "trace_choi_of_star_is_flip",
        rel_residual(choi_t_star.matrix(), choi_t_phi.flip().matrix()),
        tol::IDENTITY,
    ));

    // (id (x) t)(C_{phi^*}) = C^t_{phi^star}
    let lhs = apply_tensor(&LinearMapRep::identity(n), t_m.as_map(), &choi_adj)?;
    checks.push(IdentityCheck::new(
        "partial_transpose_of_adjoint_choi",
        rel_residual(lhs.matrix(), choi_t_star.matrix()),
        tol::IDENTITY,
    ));

    // (C_{phi^*})^T = C_{phi^star}
    checks.push(IdentityCheck::new(
        "global_transpose_of_adjoint_choi",
        rel_residual(&choi_adj.matrix().transpose(), phi_star.choi().matrix()),
        tol::IDENTITY,
    ));

    // <C_{phi^*}, x^T (x) y> = <C^t_{phi^star}, x (x) y>_{t (x) t}
    let std_pair = dot(&choi_adj.matrix().vec(), &kron(&probe_x.transpose(), probe_y).vec());
    let tt = tensor_form(&BilinearForm::trace_form(n), &BilinearForm::trace_form(m), n, m)?;
    let trace_pair = tt.pair(&choi_t_star.matrix().vec(), &kron(probe_x, probe_y).vec())?;
    let scale = (choi_adj.matrix().fro_norm() * probe_x.fro_norm() * probe_y.fro_norm()).max(1.0);
    checks.push(IdentityCheck::new(
        "pairing_against_probes",
        (std_pair - trace_pair).norm() / scale,
        tol::IDENTITY,
    ));

    Ok(IdentityReport::from_checks(checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE, ZERO};

    fn upper_shear() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn apply_identity_and_transpose() {
        let e12 = ComplexMatrix::matrix_unit(2, 0, 1);
        let id = LinearMapRep::identity(2);
        assert_eq!(id.apply(&e12).unwrap(), e12);
        let t = LinearMapRep::transpose_map(2);
        assert_eq!(t.apply(&e12).unwrap(), ComplexMatrix::matrix_unit(2, 1, 0));
    }

    #[test]
    fn apply_ad_matches_hand_multiplication() {
        // s = [[1,1],[0,1]]: s* e11 s = [[1,1],[0,0]]... computed by hand:
        // s* = [[1,0],[1,1]], s* e11 = [[1,0],[1,0]], (s* e11) s = [[1,1],[1,1]].
        let s = upper_shear();
        let ad = LinearMapRep::ad(&s).unwrap();
        let out = ad.apply(&ComplexMatrix::matrix_unit(2, 0, 0)).unwrap();
        let expect = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(out.approx_eq(&expect, 1e-14));
    }

    #[test]
    fn ad_transfer_matches_action_oracle() {
        let s = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 0.5), c(0.0, -1.0), c(2.0, 0.0), c(1.0, 1.0)],
        )
        .unwrap();
        let direct = LinearMapRep::ad(&s).unwrap();
        let via_action = LinearMapRep::from_action(2, 2, |x| s.adjoint().mul(x).mul(&s));
        assert!(direct.approx_eq(&via_action, 1e-14));
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let id2 = LinearMapRep::identity(2);
        let t = id2.tensor(&id2);
        assert!(t.approx_eq(&LinearMapRep::identity(4), 0.0));
    }

    #[test]
    fn tensor_transpose_fixes_swap() {
        let t = LinearMapRep::transpose_map(2);
        let tt = t.tensor(&t);
        let swap = LinearMapRep::transpose_map(2).choi().into_matrix();
        let out = tt.apply(&swap).unwrap();
        assert!(out.approx_eq(&swap.transpose(), 1e-14));
        assert!(out.approx_eq(&swap, 1e-14)); // SWAP is symmetric
    }

    #[test]
    fn tensor_respects_products() {
        let psi1 = LinearMapRep::ad(&upper_shear()).unwrap();
        let psi2 = LinearMapRep::transpose_map(3);
        let a = ComplexMatrix::from_fn(2, 2, |i, j| c(i as f64 + 1.0, j as f64));
        let b = ComplexMatrix::from_fn(3, 3, |i, j| c(j as f64, i as f64 - 1.0));
        let lhs = psi1.tensor(&psi2).apply(&kron(&a, &b)).unwrap();
        let rhs = kron(&psi1.apply(&a).unwrap(), &psi2.apply(&b).unwrap());
        assert!(lhs.approx_eq(&rhs, 1e-13));
    }

    #[test]
    fn choi_of_identity_is_rank_one_projector_sum() {
        let m = 3;
        let choi = LinearMapRep::identity(m).choi();
        // oracle: triple loop
        let mut acc = ComplexMatrix::zeros(m * m, m * m);
        for i in 0..m {
            for j in 0..m {
                let e = ComplexMatrix::matrix_unit(m, i, j);
                acc = acc.add(&kron(&e, &e));
            }
        }
        assert!(choi.matrix().approx_eq(&acc, 0.0));
        assert_eq!(choi.matrix().rank(tol::RANK), 1);
        assert!((choi.matrix().trace() - c(m as f64, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn choi_of_transpose_is_swap() {
        let choi = LinearMapRep::transpose_map(2).choi();
        let swap = ComplexMatrix::from_fn(4, 4, |r, s| {
            let (i, a) = (r / 2, r % 2);
            let (j, b) = (s / 2, s % 2);
            if i == b && j == a {
                ONE
            } else {
                ZERO
            }
        });
        assert!(choi.matrix().approx_eq(&swap, 0.0));
    }

    #[test]
    fn choi_of_ad_is_psd_rank_one() {
        let s = ComplexMatrix::new(
            3,
            3,
            (0..9).map(|k| c((k % 4) as f64 + 1.0, (k % 3) as f64 - 1.0)).collect(),
        )
        .unwrap();
        assert_eq!(s.rank(tol::RANK), 3);
        let choi = LinearMapRep::ad(&s).unwrap().choi();
        // entrywise oracle: sum_ij e_ij (x) s^* e_ij s
        let mut acc = ComplexMatrix::zeros(9, 9);
        for i in 0..3 {
            for j in 0..3 {
                let e = ComplexMatrix::matrix_unit(3, i, j);
                acc = acc.add(&kron(&e, &s.adjoint().mul(&e).mul(&s)));
            }
        }
        assert!(choi.matrix().approx_eq(&acc, 1e-13));
        assert!(choi.matrix().is_psd(tol::PSD).unwrap());
        assert_eq!(choi.matrix().rank(1e-9), 1);
    }

    #[test]
    fn choi_sigma_identity_and_transpose() {
        let phi = LinearMapRep::ad(&upper_shear()).unwrap();
        let via_id = phi.choi_sigma(&Isomorphism::identity(2)).unwrap();
        assert!(via_id.approx_eq(&phi.choi(), 0.0));

        // sigma = t: C^t_phi = sum e_ij (x) phi(e_ji), triple-loop oracle
        let via_t = phi.choi_sigma(&Isomorphism::transpose(2)).unwrap();
        let mut acc = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                acc = acc.add(&kron(
                    &ComplexMatrix::matrix_unit(2, i, j),
                    &phi.apply(&ComplexMatrix::matrix_unit(2, j, i)).unwrap(),
                ));
            }
        }
        assert!(via_t.matrix().approx_eq(&acc, 1e-14));
    }

    #[test]
    fn gamma_with_matrix_units_is_choi() {
        let phi = LinearMapRep::ad(&upper_shear()).unwrap();
        let e = BasisFamily::matrix_units(2);
        let g = gamma(&phi, &e, &e).unwrap();
        assert!(g.approx_eq(&phi.choi(), 1e-14));
    }

    #[test]
    fn gamma_weyl_equals_choi_and_pauli_equals_trace_choi() {
        let phi = LinearMapRep::ad(&upper_shear()).unwrap();
        let weyl = BasisFamily::weyl2();
        let g = gamma(&phi, &weyl, &weyl).unwrap();
        assert!(g.approx_eq(&phi.choi(), 1e-13));

        let pauli = BasisFamily::pauli2();
        let g = gamma(&phi, &pauli, &pauli).unwrap();
        let trace_choi = phi.choi_sigma(&Isomorphism::transpose(2)).unwrap();
        assert!(g.approx_eq(&trace_choi, 1e-13));
    }

    #[test]
    fn inverse_choi_roundtrips() {
        let phi = LinearMapRep::ad(&upper_shear()).unwrap();
        let back = inverse_choi(&phi.choi(), &BilinearForm::standard(4)).unwrap();
        assert!(back.approx_eq(&phi, 1e-13));

        // C^sigma_phi with the matching twisted form
        let sigma = Isomorphism::transpose(2);
        let form = BilinearForm::from_isomorphism(&sigma).unwrap();
        let back = inverse_choi(&phi.choi_sigma(&sigma).unwrap(), &form).unwrap();
        assert!(back.approx_eq(&phi, 1e-13));
    }

    #[test]
    fn inverse_choi_of_swap_is_transpose() {
        let swap = LinearMapRep::transpose_map(2).choi();
        let back = inverse_choi(&swap, &BilinearForm::standard(4)).unwrap();
        assert!(back.approx_eq(&LinearMapRep::transpose_map(2), 0.0));
    }

    #[test]
    fn adjoint_identity_and_flip() {
        assert!(LinearMapRep::identity(3)
            .adjoint()
            .approx_eq(&LinearMapRep::identity(3), 0.0));

        let phi = LinearMapRep::new(
            2,
            3,
            ComplexMatrix::from_fn(9, 4, |i, j| c((i + j) as f64, (i as f64) - (j as f64))),
        )
        .unwrap();
        let lhs = phi.adjoint().choi();
        let rhs = phi.choi().flip();
        assert!(lhs.approx_eq(&rhs, 1e-14));
    }

    #[test]
    fn adjoint_defining_identity_for_ad() {
        let s = upper_shear();
        let ad = LinearMapRep::ad(&s).unwrap();
        let std4 = BilinearForm::standard(4);
        let x = ComplexMatrix::from_fn(2, 2, |i, j| c(i as f64 + 0.5, j as f64 - 0.5));
        let y = ComplexMatrix::from_fn(2, 2, |i, j| c(j as f64 * 2.0, i as f64));
        let lhs = std4.pair_matrices(&ad.apply(&x).unwrap(), &y).unwrap();
        let rhs = std4.pair_matrices(&x, &ad.adjoint().apply(&y).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn adjoint_general_reduces_to_adjoint() {
        let phi = LinearMapRep::ad(&upper_shear()).unwrap();
        let id = Isomorphism::identity(2);
        let a = adjoint_general(&phi, &id, &id).unwrap();
        assert!(a.approx_eq(&phi.adjoint(), 1e-14));
    }

    #[test]
    fn trace_form_adjoint_is_involutive() {
        // the star adjoint for the trace forms roundtrips: (phi^star)^star = phi
        let phi = LinearMapRep::new(
            2,
            3,
            ComplexMatrix::from_fn(9, 4, |i, j| c(0.3 * i as f64 - j as f64, (i % 3) as f64)),
        )
        .unwrap();
        let t2 = Isomorphism::transpose(2);
        let t3 = Isomorphism::transpose(3);
        let star = adjoint_general(&phi, &t2, &t3).unwrap();
        let back = adjoint_general(&star, &t3, &t2).unwrap();
        assert!(back.approx_eq(&phi, 1e-13));
    }

    #[test]
    fn pairing_of_identities_is_dimension_squared() {
        let id = LinearMapRep::identity(2);
        let p = pairing(&id, &id).unwrap();
        assert!((p - c(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pairing_cyclic_identities() {
        // <phi, psi^* o sigma> = <psi o phi, sigma> = <psi, sigma o phi^*>
        let phi = LinearMapRep::new(
            2,
            3,
            ComplexMatrix::from_fn(9, 4, |i, j| c((2 * i + j) as f64 * 0.1, (i * j) as f64 * 0.2)),
        )
        .unwrap();
        let psi = LinearMapRep::new(
            3,
            2,
            ComplexMatrix::from_fn(4, 9, |i, j| c((i + 3) as f64 * 0.3, (j % 5) as f64 * -0.1)),
        )
        .unwrap();
        let sigma = LinearMapRep::new(
            2,
            2,
            ComplexMatrix::from_fn(4, 4, |i, j| c((i * 2 + j) as f64 * 0.25, 0.5 - j as f64)),
        )
        .unwrap();
        let a = pairing(&phi, &psi.adjoint().compose(&sigma).unwrap()).unwrap();
        let b = pairing(&psi.compose(&phi).unwrap(), &sigma).unwrap();
        let c_ = pairing(&psi, &sigma.compose(&phi.adjoint()).unwrap()).unwrap();
        assert!((a - b).norm() < 1e-12);
        assert!((b - c_).norm() < 1e-12);
    }

    #[test]
    fn pairing_matches_transfer_trace_oracle() {
        // <phi, psi> = tr(L_phi^T L_psi): independent route
        let phi = LinearMapRep::ad(&upper_shear()).unwrap();
        let psi = LinearMapRep::transpose_map(2);
        let p = pairing(&phi, &psi).unwrap();
        let oracle = phi.transfer().transpose().mul(psi.transfer()).trace();
        assert!((p - oracle).norm() < 1e-13);
    }

    #[test]
    fn prop52_trivial_cases() {
        let phi = LinearMapRep::ad(&upper_shear()).unwrap();
        let id_map = LinearMapRep::identity(2);
        let sigma = Isomorphism::transpose(2);
        let tau = Isomorphism::identity(2);
        let report = verify_prop52(&id_map, &id_map, &phi, &sigma, &tau).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn table1_on_identity_and_transpose() {
        let x = ComplexMatrix::from_fn(2, 2, |i, j| c(i as f64 - j as f64, 1.0));
        let y = ComplexMatrix::from_fn(2, 2, |i, j| c((i * j) as f64, -1.5));
        for phi in [LinearMapRep::identity(2), LinearMapRep::transpose_map(2)] {
            let report = table1_suite(&phi, &x, &y).unwrap();
            assert!(report.pass, "{report:?}");
        }
    }
}
