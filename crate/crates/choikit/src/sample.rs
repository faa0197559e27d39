//! Seeded random generators for maps, isomorphisms, forms, and certified
//! cone members. Everything is deterministic for a fixed `ChaCha8Rng` seed.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::forms::BilinearForm;
use crate::linalg::{ComplexMatrix, ONE, ZERO};
use crate::maps::{Isomorphism, LinearMapRep};
use crate::tol;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::new(rows, cols, (0..rows * cols).map(|_| complex_normal(rng)).collect())
        .expect("random matrix")
}

pub fn random_vector(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| complex_normal(rng)).collect()
}

/// Random map with i.i.d. complex normal transfer entries.
pub fn random_map(rng: &mut impl Rng, m: usize, n: usize) -> LinearMapRep {
    LinearMapRep::new(m, n, random_matrix(rng, n * n, m * m)).expect("random map")
}

/// Resamples until the transfer is full rank (failure probability ~ 0).
pub fn random_isomorphism(rng: &mut impl Rng, m: usize) -> Isomorphism {
    loop {
        if let Ok(iso) = Isomorphism::new(random_map(rng, m, m)) {
            return iso;
        }
    }
}

/// Random nonsingular square matrix.
pub fn random_nonsingular(rng: &mut impl Rng, m: usize) -> ComplexMatrix {
    loop {
        let s = random_matrix(rng, m, m);
        if s.rank(tol::RANK) == m {
            return s;
        }
    }
}

/// A CP map from `num_kraus` random Kraus operators,
/// `x -> sum_i a_i^* x a_i`. The certificate is the Kraus family itself.
pub fn random_cp(rng: &mut impl Rng, m: usize, n: usize, num_kraus: usize) -> (LinearMapRep, Vec<ComplexMatrix>) {
    let kraus: Vec<ComplexMatrix> = (0..num_kraus.max(1)).map(|_| random_matrix(rng, m, n)).collect();
    (cp_from_kraus(m, n, &kraus), kraus)
}

/// Assembles `x -> sum_i a_i^* x a_i` from Kraus operators in `C^{m x n}`.
pub fn cp_from_kraus(m: usize, n: usize, kraus: &[ComplexMatrix]) -> LinearMapRep {
    let mut transfer = ComplexMatrix::zeros(n * n, m * m);
    for a in kraus {
        assert_eq!((a.rows(), a.cols()), (m, n));
        transfer = transfer.add(&crate::linalg::kron(&a.adjoint(), &a.transpose()));
    }
    LinearMapRep::new(m, n, transfer).expect("kraus transfer")
}

/// A `k`-superpositive map: Kraus operators of rank at most `k`, each the
/// product of an `m x k` and a `k x n` factor. The Choi matrix then has
/// Schmidt number at most `k` by construction.
pub fn random_spk(
    rng: &mut impl Rng,
    m: usize,
    n: usize,
    k: usize,
    terms: usize,
) -> (LinearMapRep, Vec<ComplexMatrix>) {
    let kraus: Vec<ComplexMatrix> = (0..terms.max(1))
        .map(|_| random_matrix(rng, m, k).mul(&random_matrix(rng, k, n)))
        .collect();
    (cp_from_kraus(m, n, &kraus), kraus)
}

/// A positive (P_1-certified) map: convex mixture of a CP map and a
/// co-CP map `cp o t`.
pub fn random_positive(rng: &mut impl Rng, m: usize, n: usize) -> LinearMapRep {
    let lambda: f64 = rng.random();
    let (cp1, _) = random_cp(rng, m, n, m.min(n));
    let (cp2, _) = random_cp(rng, m, n, m.min(n));
    let cocp = cp2.compose(&LinearMapRep::transpose_map(m)).expect("cocp");
    let a = scale_map(&cp1, lambda);
    let b = scale_map(&cocp, 1.0 - lambda);
    add_maps(&a, &b)
}

pub fn scale_map(phi: &LinearMapRep, s: f64) -> LinearMapRep {
    LinearMapRep::new(
        phi.dim_in(),
        phi.dim_out(),
        phi.transfer().scale(Complex64::new(s, 0.0)),
    )
    .expect("scale map")
}

pub fn add_maps(a: &LinearMapRep, b: &LinearMapRep) -> LinearMapRep {
    LinearMapRep::new(a.dim_in(), a.dim_out(), a.transfer().add(b.transfer())).expect("add maps")
}

/// Random symmetric non-degenerate Gram matrix via `G^T G` plus a small
/// shift; invertibility is re-checked and the draw repeated on failure.
pub fn random_symmetric_form(rng: &mut impl Rng, d: usize) -> BilinearForm {
    loop {
        let g = random_matrix(rng, d, d);
        let sym = g.transpose().mul(&g);
        let shifted = sym.add(&ComplexMatrix::identity(d).scale(Complex64::new(0.1, 0.0)));
        if let Ok(form) = BilinearForm::new(shifted) {
            return form;
        }
    }
}

/// Random non-degenerate (not necessarily symmetric) form.
pub fn random_form(rng: &mut impl Rng, d: usize) -> BilinearForm {
    loop {
        if let Ok(form) = BilinearForm::new(random_matrix(rng, d, d)) {
            return form;
        }
    }
}

/// Random unit vector.
pub fn random_unit_vector(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    loop {
        let v = random_vector(rng, len);
        let norm = crate::linalg::vec_norm(&v);
        if norm > 1e-6 {
            return v.iter().map(|z| z / norm).collect();
        }
    }
}

/// Matrix with orthonormal columns (economy Q of a random Gaussian draw).
pub fn random_isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(cols <= rows);
    loop {
        let g = random_matrix(rng, rows, cols);
        if g.rank(1e-8) == cols {
            let (u, _, _) = g.svd();
            return ComplexMatrix::from_fn(rows, cols, |i, j| u.get(i, j));
        }
    }
}

/// Rank-one PSD matrix `v v^*` from a random unit vector.
pub fn random_rank_one_psd(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let v = random_unit_vector(rng, dim);
    ComplexMatrix::from_fn(dim, dim, |i, j| v[i] * v[j].conj())
}

/// Identity-free sanity anchor used in a few suites.
pub fn basis_like_identity(dim: usize) -> Vec<Complex64> {
    (0..dim).map(|i| if i == 0 { ONE } else { ZERO }).collect()
}
