//! Membership oracles for the cone hierarchy
//! `SP_1 c SP_k c CP c P_k c P_1` and its Choi-side mirror
//! `S_1 c S_k c PSD c BP_k c BP_1`, plus the structural checkers for the
//! twisted-Choi correspondence.
//!
//! Block positivity and Schmidt number are hard in general; the oracles
//! return `Unknown` instead of unsound `Member` verdicts except where an
//! exact certificate exists (PSD tests, `k = min(m,n)`, explicit
//! decompositions, and the PPT regime in 2x2 / 2x3).

mod schmidt;
mod seesaw;

pub use schmidt::{reduction_map, schmidt_number_bounds, SchmidtBounds, SchmidtLowerWitness};
pub use seesaw::schmidt_rank;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::BilinearForm;
use crate::linalg::{BipartiteOperator, ComplexMatrix, Slot};
use crate::maps::{Isomorphism, LinearMapRep};
use crate::sample;
use crate::tol;

/// Cone identifiers for reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeLabel {
    SuperPositive,
    CompletelyPositive,
    Positive,
    BlockPositive,
    SchmidtNumber,
    PptState,
    Psd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Member,
    NonMember,
    Unknown,
}

/// Certificate attached to a verdict.
///
/// For `NonMember` this is always a vector `xi` with `<xi|C|xi> < 0` (or a
/// non-real expectation when Hermiticity itself fails). For exact `Member`
/// verdicts it is a matrix whose columns reconstruct the operator as
/// `sum_p col_p col_p^*`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Vector { entries: Vec<[f64; 2]> },
    Matrix { matrix: crate::json::MatrixDto },
}

impl Witness {
    pub fn vector(v: &[Complex64]) -> Self {
        Witness::Vector { entries: v.iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn matrix(m: &ComplexMatrix) -> Self {
        Witness::Matrix { matrix: m.clone().into() }
    }

    pub fn as_vector(&self) -> Option<Vec<Complex64>> {
        match self {
            Witness::Vector { entries } => {
                Some(entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            }
            Witness::Matrix { .. } => None,
        }
    }
}

/// Outcome of a membership oracle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeVerdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub value: Option<f64>,
    pub detail: String,
}

impl ConeVerdict {
    fn member(detail: String, value: Option<f64>, witness: Option<Witness>) -> Self {
        Self { status: Status::Member, witness, value, detail }
    }

    fn non_member(detail: String, value: f64, witness: Witness) -> Self {
        Self { status: Status::NonMember, witness: Some(witness), value: Some(value), detail }
    }

    fn unknown(detail: String, value: Option<f64>) -> Self {
        Self { status: Status::Unknown, witness: None, value, detail }
    }
}

/// Member certificate for an exact PSD verdict: columns of
/// `V diag(sqrt(lambda))` reconstruct the operator.
fn psd_certificate(mat: &ComplexMatrix, vals: &[f64], vecs: &ComplexMatrix) -> Witness {
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0.0).collect();
    if keep.is_empty() {
        return Witness::matrix(&ComplexMatrix::zeros(mat.rows(), 1));
    }
    Witness::matrix(&ComplexMatrix::from_fn(mat.rows(), keep.len(), |i, j| {
        vecs.get(i, keep[j]) * Complex64::new(vals[keep[j]].sqrt(), 0.0)
    }))
}

/// Verdict for a matrix that fails Hermiticity: the expectation value at
/// the returned witness has a non-zero imaginary part.
fn non_hermitian_verdict(mat: &ComplexMatrix, context: &str) -> ConeVerdict {
    let anti = mat.sub(&mat.adjoint()).scale(Complex64::new(0.0, -0.5));
    let (vals, vecs) = anti.hermitian_eig().expect("anti-Hermitian part is Hermitian");
    // eigenvalue of largest magnitude
    let idx = if vals.first().map_or(0.0, |v| v.abs()) >= vals.last().map_or(0.0, |v| v.abs()) {
        0
    } else {
        vals.len() - 1
    };
    let xi: Vec<Complex64> = (0..anti.rows()).map(|i| vecs.get(i, idx)).collect();
    ConeVerdict::non_member(
        format!(
            "{context}: matrix is not Hermitian; <xi|C|xi> has imaginary part {:.3e} at the witness",
            vals[idx]
        ),
        vals[idx],
        Witness::vector(&xi),
    )
}

/// Choi's theorem test, exact: `phi` is CP iff its Choi matrix is PSD.
pub fn is_cp(phi: &LinearMapRep) -> ConeVerdict {
    let choi = phi.choi();
    let mat = choi.matrix();
    if mat.check_hermitian().is_err() {
        return non_hermitian_verdict(mat, "Choi matrix");
    }
    let (vals, vecs) = mat.hermitian_eig().expect("hermitian");
    let min = *vals.last().expect("nonempty spectrum");
    let floor = -tol::PSD * mat.fro_norm().max(1.0);
    if min >= floor {
        ConeVerdict::member(
            format!("Choi matrix PSD, min eigenvalue {min:.3e}"),
            Some(min),
            Some(psd_certificate(mat, &vals, &vecs)),
        )
    } else {
        let idx = vals.len() - 1;
        let xi: Vec<Complex64> = (0..mat.rows()).map(|i| vecs.get(i, idx)).collect();
        ConeVerdict::non_member(
            format!("Choi matrix has negative eigenvalue {min:.3e}"),
            min,
            Witness::vector(&xi),
        )
    }
}

/// Block positivity at Schmidt level `k`: minimizes `<xi|C|xi>` over unit
/// vectors of Schmidt rank <= k by see-saw from `budget` random starts.
/// Exact when `C` is PSD (member for every k) or `k = min(m,n)`.
pub fn is_k_blockpositive(
    c: &BipartiteOperator,
    k: usize,
    budget: usize,
    seed: u64,
) -> Result<ConeVerdict> {
    let (m, n) = (c.dim_a(), c.dim_b());
    let kmax = m.min(n);
    if k == 0 || k > kmax {
        return Err(Error::InvalidK { k, max: kmax });
    }
    let mat = c.matrix();
    mat.check_hermitian()?;
    let (vals, vecs) = mat.hermitian_eig()?;
    let min = *vals.last().expect("nonempty spectrum");
    let scale = mat.fro_norm().max(1.0);
    if min >= -tol::PSD * scale {
        return Ok(ConeVerdict::member(
            format!("PSD (min eigenvalue {min:.3e}), hence k-block-positive for every k"),
            Some(min),
            Some(psd_certificate(mat, &vals, &vecs)),
        ));
    }
    if k == kmax {
        // unconstrained Schmidt rank: block positivity is plain positivity
        let idx = vals.len() - 1;
        let xi: Vec<Complex64> = (0..mat.rows()).map(|i| vecs.get(i, idx)).collect();
        return Ok(ConeVerdict::non_member(
            format!("negative eigenvalue {min:.3e} at k = min(m,n)"),
            min,
            Witness::vector(&xi),
        ));
    }

    let outcome = seesaw::minimize_schmidt_rayleigh(c, k, budget, seed);
    let threshold = -tol::BLOCKPOS * mat.fro_norm();
    if outcome.value < threshold {
        // re-verify the witness from scratch before returning it
        let value = seesaw::rayleigh(mat, &outcome.witness);
        let rank = seesaw::schmidt_rank(&outcome.witness, m, n, 1e-8);
        if value < threshold && rank <= k {
            return Ok(ConeVerdict::non_member(
                format!("see-saw witness of Schmidt rank {rank} with <xi|C|xi> = {value:.6e}"),
                value,
                Witness::vector(&outcome.witness),
            ));
        }
    }
    Ok(ConeVerdict::unknown(
        format!(
            "no Schmidt-rank-{k} violation found at budget {budget}; best value {:.6e}",
            outcome.value
        ),
        Some(outcome.value),
    ))
}

/// k-positivity of a map, through block positivity of its Choi matrix.
pub fn is_k_positive(
    phi: &LinearMapRep,
    k: usize,
    budget: usize,
    seed: u64,
) -> Result<ConeVerdict> {
    let kmax = phi.dim_in().min(phi.dim_out());
    if k == 0 || k > kmax {
        return Err(Error::InvalidK { k, max: kmax });
    }
    let choi = phi.choi();
    if choi.matrix().check_hermitian().is_err() {
        return Ok(non_hermitian_verdict(choi.matrix(), "Choi matrix"));
    }
    is_k_blockpositive(&choi, k, budget, seed)
}

/// PPT test on the Choi matrix: PSD together with a PSD partial transpose.
/// Exact in every dimension.
pub fn is_ppt(c: &BipartiteOperator) -> Result<ConeVerdict> {
    let mat = c.matrix();
    mat.check_hermitian()?;
    let (vals, vecs) = mat.hermitian_eig()?;
    let min = *vals.last().expect("spectrum");
    if min < -tol::PSD * mat.fro_norm().max(1.0) {
        let idx = vals.len() - 1;
        let xi: Vec<Complex64> = (0..mat.rows()).map(|i| vecs.get(i, idx)).collect();
        return Ok(ConeVerdict::non_member(
            format!("not PSD: eigenvalue {min:.3e}"),
            min,
            Witness::vector(&xi),
        ));
    }
    let pt = c.partial_transpose(Slot::Second);
    let (pvals, pvecs) = pt.matrix().hermitian_eig()?;
    let pmin = *pvals.last().expect("spectrum");
    if pmin < -tol::PSD * pt.matrix().fro_norm().max(1.0) {
        let idx = pvals.len() - 1;
        let xi: Vec<Complex64> = (0..pt.matrix().rows()).map(|i| pvecs.get(i, idx)).collect();
        return Ok(ConeVerdict::non_member(
            format!("partial transpose has negative eigenvalue {pmin:.3e}"),
            pmin,
            Witness::vector(&xi),
        ));
    }
    Ok(ConeVerdict::member(
        format!("PSD with PSD partial transpose (min eigenvalues {min:.3e}, {pmin:.3e})"),
        Some(min.min(pmin)),
        Some(psd_certificate(mat, &vals, &vecs)),
    ))
}

/// k-superpositivity: CP with Schmidt number of the Choi matrix <= k.
/// Exact at `k = 1` in 2x2 and 2x3 through the PPT criterion (an external
/// fact flagged in the verdict detail); elsewhere sound but incomplete.
pub fn is_k_superpositive(
    phi: &LinearMapRep,
    k: usize,
    budget: usize,
    seed: u64,
) -> Result<ConeVerdict> {
    let (m, n) = (phi.dim_in(), phi.dim_out());
    let kmax = m.min(n);
    if k == 0 || k > kmax {
        return Err(Error::InvalidK { k, max: kmax });
    }
    let cp = is_cp(phi);
    if cp.status != Status::Member {
        return Ok(ConeVerdict {
            detail: format!("not completely positive, hence not k-superpositive: {}", cp.detail),
            ..cp
        });
    }
    let choi = phi.choi();
    if k == kmax {
        return Ok(ConeVerdict::member(
            format!("CP and k = min(m,n): SP_k coincides with CP; {}", cp.detail),
            cp.value,
            cp.witness,
        ));
    }

    let bounds = schmidt_number_bounds(&choi, budget, seed)?;
    if bounds.lower > k {
        let w = bounds.lower_witness.expect("lower bound above 1 carries a witness");
        return Ok(ConeVerdict::non_member(
            format!(
                "Schmidt number > {} certified by {} witness (eigenvalue {:.3e})",
                bounds.lower - 1,
                w.witness_map,
                w.eigenvalue
            ),
            w.eigenvalue,
            Witness::vector(&w.eigenvector),
        ));
    }
    if bounds.upper <= k {
        let d = m * n;
        let cert = ComplexMatrix::from_fn(d, bounds.decomposition.len().max(1), |i, j| {
            bounds.decomposition.get(j).map_or(crate::linalg::ZERO, |v| v[i])
        });
        return Ok(ConeVerdict::member(
            format!(
                "explicit decomposition into {} vectors of Schmidt rank <= {}",
                bounds.decomposition.len(),
                bounds.upper
            ),
            None,
            Some(Witness::matrix(&cert)),
        ));
    }
    if k == 1 && ((m, n) == (2, 2) || (m, n) == (2, 3) || (m, n) == (3, 2)) {
        let ppt = is_ppt(&choi)?;
        if ppt.status == Status::Member {
            return Ok(ConeVerdict::member(
                "PPT in 2x2/2x3, separable by the Horodecki theorem (external fact)".into(),
                ppt.value,
                ppt.witness,
            ));
        }
        // a PPT violation is already covered by the transpose witness in
        // the lower bound, but keep this branch exact anyway
        if ppt.status == Status::NonMember {
            return Ok(ConeVerdict {
                detail: format!("entangled Choi matrix: {}", ppt.detail),
                ..ppt
            });
        }
    }
    Ok(ConeVerdict::unknown(
        format!(
            "Schmidt number bounds [{}, {}] do not decide level {k} at budget {budget}",
            bounds.lower, bounds.upper
        ),
        None,
    ))
}

/// Detects whether an isomorphism is of the form `Ad_s` for nonsingular
/// `s`, and recovers `s` (normalized so its largest-modulus entry is real
/// positive). The Choi matrix of `Ad_s` is the rank-one projector onto
/// `conj(vec(s))`, so detection is an eigendecomposition plus a
/// reconstruction check.
pub fn detect_ad(sigma: &Isomorphism) -> Option<ComplexMatrix> {
    let m = sigma.dim();
    let choi = sigma.as_map().choi();
    let mat = choi.matrix();
    if mat.check_hermitian().is_err() {
        return None;
    }
    let (vals, vecs) = mat.hermitian_eig().ok()?;
    let top = vals[0];
    if top <= 0.0 {
        return None;
    }
    // PSD of rank one within tolerance
    if vals.iter().skip(1).any(|&v| v.abs() > 1e-8 * top) {
        return None;
    }
    let scaled: Vec<Complex64> = (0..mat.rows())
        .map(|i| vecs.get(i, 0).conj() * Complex64::new(top.sqrt(), 0.0))
        .collect();
    let s = ComplexMatrix::unvec(m, m, &scaled).ok()?;
    if s.rank(tol::RANK) != m {
        return None;
    }
    // phase normalization: largest-modulus entry real positive
    let pivot = s
        .entries()
        .iter()
        .cloned()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("nonempty");
    let phase = pivot / pivot.norm();
    let s = s.scale(phase.conj());
    // reconstruction contract
    let rebuilt = LinearMapRep::ad(&s).ok()?;
    let scale = sigma.as_map().transfer().fro_norm().max(1.0);
    if rebuilt.transfer().sub(sigma.as_map().transfer()).fro_norm() <= tol::AD_RECOVERY * scale {
        Some(s)
    } else {
        None
    }
}

/// One certified sample checked against the twisted-Choi correspondence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleCheck {
    /// Certificate of the sampled map ("id", "cp", "sp_k", "positive").
    pub kind: String,
    /// Which correspondence was probed ("block_positive" or "schmidt_number").
    pub check: String,
    pub status: Status,
    pub consistent: bool,
    pub note: String,
}

/// Report of [`check_theorem43`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Theorem43Report {
    pub k: usize,
    pub sigma_status: Status,
    pub sigma_inverse_status: Status,
    /// `Some(true)` when both directions carry exact membership
    /// certificates, `Some(false)` when either carries an exact violation,
    /// `None` when the oracles were inconclusive.
    pub certified_both_k_positive: Option<bool>,
    pub samples: Vec<SampleCheck>,
    /// Set when the theorem predicts the correspondence must fail and a
    /// concrete failing instance was found.
    pub predicted_failure_demonstrated: bool,
    /// No pair of exact certificates contradicts the theorem.
    pub consistent: bool,
}

/// Probes the equivalence "both sigma and its inverse are k-positive iff
/// the twisted Choi transform preserves the k-positive and
/// k-superpositive correspondences" on certified samples.
pub fn check_theorem43(
    sigma: &Isomorphism,
    k: usize,
    trials: usize,
    budget: usize,
    seed: u64,
) -> Result<Theorem43Report> {
    let m = sigma.dim();
    if k == 0 || k > m {
        return Err(Error::InvalidK { k, max: m });
    }
    let mut rng = sample::rng_from_seed(seed);
    let sigma_inv = sigma.inverse()?;
    let v1 = is_k_positive(sigma.as_map(), k, budget, seed.wrapping_add(1))?;
    let v2 = is_k_positive(sigma_inv.as_map(), k, budget, seed.wrapping_add(2))?;
    let certified_both = match (v1.status, v2.status) {
        (Status::Member, Status::Member) => Some(true),
        (Status::NonMember, _) | (_, Status::NonMember) => Some(false),
        _ => None,
    };
    let predicts_failure = certified_both == Some(false);

    let mut samples = Vec::new();
    let mut demonstrated = false;
    let mut consistent = true;

    let record_bp = |phi: &LinearMapRep,
                         kind: &str,
                         samples: &mut Vec<SampleCheck>,
                         demonstrated: &mut bool,
                         consistent: &mut bool,
                         seed: u64|
     -> Result<()> {
        let twisted = phi.choi_sigma(sigma)?;
        let verdict = match twisted.matrix().check_hermitian() {
            Ok(()) => is_k_blockpositive(&twisted, k, budget, seed)?,
            Err(_) => non_hermitian_verdict(twisted.matrix(), "twisted Choi matrix"),
        };
        let (ok, note) = match (verdict.status, certified_both) {
            (Status::NonMember, Some(true)) => {
                (false, "certified violation against certified k-positivity".to_string())
            }
            (Status::NonMember, Some(false)) => {
                *demonstrated = true;
                (true, "predicted failure demonstrated".to_string())
            }
            (Status::NonMember, None) => {
                (true, "violation found; sigma cannot be k-positive both ways".to_string())
            }
            (Status::Member, _) => (true, "exact membership".to_string()),
            (Status::Unknown, _) => (true, "no violation found at budget".to_string()),
        };
        if !ok {
            *consistent = false;
        }
        samples.push(SampleCheck {
            kind: kind.into(),
            check: "block_positive".into(),
            status: verdict.status,
            consistent: ok,
            note,
        });
        Ok(())
    };

    // the identity map is k-positive for every k and probes C_sigma itself
    record_bp(
        &LinearMapRep::identity(m),
        "id",
        &mut samples,
        &mut demonstrated,
        &mut consistent,
        seed.wrapping_add(3),
    )?;

    let n_samples = trials.max(1);
    for t in 0..n_samples {
        // CP maps are k-positive for every k
        let (phi, _) = sample::random_cp(&mut rng, m, m, m);
        record_bp(
            &phi,
            "cp",
            &mut samples,
            &mut demonstrated,
            &mut consistent,
            seed.wrapping_add(10 + t as u64),
        )?;
        if k == 1 {
            // positive (P_1-certified) mixtures
            let pos = sample::random_positive(&mut rng, m, m);
            record_bp(
                &pos,
                "positive",
                &mut samples,
                &mut demonstrated,
                &mut consistent,
                seed.wrapping_add(100 + t as u64),
            )?;
        }
    }

    // SP_k side: Schmidt number of the twisted Choi matrix
    for t in 0..n_samples {
        let (phi, _) = sample::random_spk(&mut rng, m, m, k, m);
        let twisted = phi.choi_sigma(sigma)?;
        let herm_ok = twisted.matrix().check_hermitian().is_ok();
        let psd_ok = herm_ok && twisted.matrix().is_psd(tol::PSD)?;
        let (status, ok, note) = if !psd_ok {
            // S_k members are PSD; a non-PSD twisted Choi is a certified violation
            match certified_both {
                Some(true) => (
                    Status::NonMember,
                    false,
                    "twisted Choi of an SP_k map is not PSD against certified k-positivity"
                        .to_string(),
                ),
                Some(false) => {
                    demonstrated = true;
                    (Status::NonMember, true, "predicted failure demonstrated".to_string())
                }
                None => (
                    Status::NonMember,
                    true,
                    "violation found; sigma cannot be k-positive both ways".to_string(),
                ),
            }
        } else {
            let bounds =
                schmidt_number_bounds(&twisted, budget, seed.wrapping_add(200 + t as u64))?;
            if bounds.lower > k {
                match certified_both {
                    Some(true) => (
                        Status::NonMember,
                        false,
                        "certified Schmidt violation against certified k-positivity".to_string(),
                    ),
                    Some(false) => {
                        demonstrated = true;
                        (Status::NonMember, true, "predicted failure demonstrated".to_string())
                    }
                    None => (
                        Status::NonMember,
                        true,
                        "violation found; sigma cannot be k-positive both ways".to_string(),
                    ),
                }
            } else if bounds.upper <= k {
                (Status::Member, true, "explicit decomposition found".to_string())
            } else {
                (Status::Unknown, true, "bounds inconclusive at budget".to_string())
            }
        };
        if !ok {
            consistent = false;
        }
        samples.push(SampleCheck {
            kind: format!("sp_{k}"),
            check: "schmidt_number".into(),
            status,
            consistent: ok,
            note,
        });
    }

    Ok(Theorem43Report {
        k,
        sigma_status: v1.status,
        sigma_inverse_status: v2.status,
        certified_both_k_positive: certified_both,
        samples,
        predicted_failure_demonstrated: demonstrated && predicts_failure,
        consistent,
    })
}

/// Report of [`check_prop46`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Prop46Report {
    pub s_symmetric: bool,
    pub s_antisymmetric: bool,
    pub form_symmetric: bool,
    pub transfer_symmetric: bool,
    /// Gram symmetry of the Ad_s form holds iff `s = +-s^T`.
    pub biconditional_form: bool,
    /// `(Ad_s)^T = Ad_s` holds iff `s = +-s^T`.
    pub biconditional_transfer: bool,
    pub pass: bool,
}

/// Checks that the bilinear form induced by `Ad_s` is symmetric exactly
/// when `s` is symmetric or anti-symmetric, along with the matching
/// statement for the transfer matrix.
pub fn check_prop46(s: &ComplexMatrix) -> Result<Prop46Report> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Prop 4.6 check needs square s, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    if s.rank(tol::RANK) != s.rows() {
        return Err(Error::SingularS);
    }
    let scale = s.fro_norm().max(1.0);
    let s_symmetric = s.sub(&s.transpose()).fro_norm() <= tol::IDENTITY * scale;
    let s_antisymmetric = s.add(&s.transpose()).fro_norm() <= tol::IDENTITY * scale;
    let either = s_symmetric || s_antisymmetric;

    let ad = Isomorphism::ad(s)?;
    let form = BilinearForm::from_isomorphism(&ad)?;
    let form_symmetric = form.is_symmetric();

    let transfer = ad.as_map().transfer();
    let transfer_symmetric =
        transfer.sub(&transfer.transpose()).fro_norm() <= tol::IDENTITY * transfer.fro_norm().max(1.0);

    let biconditional_form = form_symmetric == either;
    let biconditional_transfer = transfer_symmetric == either;
    Ok(Prop46Report {
        s_symmetric,
        s_antisymmetric,
        form_symmetric,
        transfer_symmetric,
        biconditional_form,
        biconditional_transfer,
        pass: biconditional_form && biconditional_transfer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cp_verdicts() {
        assert_eq!(is_cp(&LinearMapRep::identity(2)).status, Status::Member);

        let t = is_cp(&LinearMapRep::transpose_map(2));
        assert_eq!(t.status, Status::NonMember);
        // witness re-verification: <xi|SWAP|xi> = -1 for the antisymmetric vector
        let xi = t.witness.unwrap().as_vector().unwrap();
        let swap = LinearMapRep::transpose_map(2).choi();
        let v = seesaw::rayleigh(swap.matrix(), &xi);
        assert!((v + 1.0).abs() < 1e-10);

        let mut rng = sample::rng_from_seed(8);
        let s = sample::random_nonsingular(&mut rng, 3);
        assert_eq!(is_cp(&LinearMapRep::ad(&s).unwrap()).status, Status::Member);
    }

    #[test]
    fn blockpositive_on_psd_and_swap() {
        let c_ad = LinearMapRep::ad(&ComplexMatrix::identity(2)).unwrap().choi();
        for k in 1..=2 {
            let v = is_k_blockpositive(&c_ad, k, 8, 3).unwrap();
            assert_eq!(v.status, Status::Member);
        }
        let swap = LinearMapRep::transpose_map(2).choi();
        let v1 = is_k_blockpositive(&swap, 1, 32, 3).unwrap();
        assert_eq!(v1.status, Status::Unknown);
        let v2 = is_k_blockpositive(&swap, 2, 32, 3).unwrap();
        assert_eq!(v2.status, Status::NonMember);
        assert!((v2.value.unwrap() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_k_rejected() {
        let swap = LinearMapRep::transpose_map(2).choi();
        assert!(matches!(is_k_blockpositive(&swap, 0, 4, 0), Err(Error::InvalidK { .. })));
        assert!(matches!(is_k_blockpositive(&swap, 3, 4, 0), Err(Error::InvalidK { .. })));
    }

    #[test]
    fn transpose_is_positive_but_not_two_positive() {
        let t = LinearMapRep::transpose_map(2);
        let v1 = is_k_positive(&t, 1, 64, 5).unwrap();
        assert_ne!(v1.status, Status::NonMember);
        let v2 = is_k_positive(&t, 2, 16, 5).unwrap();
        assert_eq!(v2.status, Status::NonMember);
        let xi = v2.witness.unwrap().as_vector().unwrap();
        assert_eq!(schmidt_rank(&xi, 2, 2, 1e-8), 2);
    }

    #[test]
    fn reduction_map_positivity_ladder() {
        // x -> k tr(x) I - x on M_3 is k-positive, not (k+1)-positive:
        // the Choi matrix is k*I - C_id with spectrum {k - 3, k, ..., k}.
        for k in 1..=2usize {
            let w = reduction_map(3, k);
            let v = is_k_positive(&w, k, 48, 7).unwrap();
            assert_ne!(v.status, Status::NonMember, "level {k} should not be violated");
            let v_next = is_k_positive(&w, k + 1, 48, 7).unwrap();
            assert_eq!(v_next.status, Status::NonMember, "level {} must fail", k + 1);
        }
    }

    #[test]
    fn superpositive_depolarizing_and_identity() {
        let dep = LinearMapRep::depolarizing(2);
        let v = is_k_superpositive(&dep, 1, 64, 13).unwrap();
        assert_eq!(v.status, Status::Member, "{}", v.detail);

        let id = LinearMapRep::identity(2);
        let v1 = is_k_superpositive(&id, 1, 32, 13).unwrap();
        assert_eq!(v1.status, Status::NonMember);
        let v2 = is_k_superpositive(&id, 2, 8, 13).unwrap();
        assert_eq!(v2.status, Status::Member);
    }

    #[test]
    fn detect_ad_roundtrip_and_rejections() {
        let mut rng = sample::rng_from_seed(21);
        let s = sample::random_nonsingular(&mut rng, 3);
        let sigma = Isomorphism::ad(&s).unwrap();
        let found = detect_ad(&sigma).expect("Ad_s detected");
        let rebuilt = LinearMapRep::ad(&found).unwrap();
        assert!(rebuilt.approx_eq(sigma.as_map(), tol::AD_RECOVERY));

        assert!(detect_ad(&Isomorphism::transpose(2)).is_none());

        let id_s = detect_ad(&Isomorphism::identity(2)).expect("identity is Ad_I");
        assert!(id_s.approx_eq(&ComplexMatrix::identity(2), 1e-10));
    }

    #[test]
    fn prop46_cases() {
        let r = check_prop46(&ComplexMatrix::identity(2)).unwrap();
        assert!(r.pass && r.s_symmetric && r.form_symmetric);

        let anti = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        let r = check_prop46(&anti).unwrap();
        assert!(r.pass && r.s_antisymmetric && r.form_symmetric);

        let shear = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        let r = check_prop46(&shear).unwrap();
        assert!(r.pass && !r.s_symmetric && !r.s_antisymmetric && !r.form_symmetric);

        let singular = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(check_prop46(&singular), Err(Error::SingularS)));
    }

    #[test]
    fn theorem43_for_transpose() {
        let sigma = Isomorphism::transpose(2);
        let r1 = check_theorem43(&sigma, 1, 3, 32, 17).unwrap();
        assert!(r1.consistent, "{r1:?}");
        assert!(!r1.predicted_failure_demonstrated);

        let r2 = check_theorem43(&sigma, 2, 3, 16, 17).unwrap();
        assert!(r2.consistent, "{r2:?}");
        assert_eq!(r2.certified_both_k_positive, Some(false));
        assert!(r2.predicted_failure_demonstrated, "{r2:?}");
    }

    #[test]
    fn ad_composed_with_transpose_is_never_two_positive() {
        // spot check of the order-isomorphism dichotomy: Ad_s o t stays
        // positive but loses 2-positivity for every nonsingular s
        let mut rng = sample::rng_from_seed(31);
        for m in [2usize, 3] {
            let s = sample::random_nonsingular(&mut rng, m);
            let phi = LinearMapRep::ad(&s)
                .unwrap()
                .compose(&LinearMapRep::transpose_map(m))
                .unwrap();
            let v = is_k_positive(&phi, 2, 32, 33).unwrap();
            assert_eq!(v.status, Status::NonMember, "m={m}: {v:?}");
        }
    }

    #[test]
    fn theorem43_for_ad() {
        let mut rng = sample::rng_from_seed(23);
        let s = sample::random_nonsingular(&mut rng, 2);
        let sigma = Isomorphism::ad(&s).unwrap();
        let r = check_theorem43(&sigma, 2, 3, 32, 19).unwrap();
        assert_eq!(r.certified_both_k_positive, Some(true), "{r:?}");
        assert!(r.consistent, "{r:?}");
        for s in &r.samples {
            assert_ne!(s.status, Status::NonMember, "{s:?}");
        }
    }

    #[test]
    fn ppt_exactness() {
        let sep = LinearMapRep::depolarizing(2).choi();
        assert_eq!(is_ppt(&sep).unwrap().status, Status::Member);
        let ent = LinearMapRep::identity(2).choi();
        let v = is_ppt(&ent).unwrap();
        assert_eq!(v.status, Status::NonMember);
        // witness re-verifies on the partially transposed matrix
        let xi = v.witness.unwrap().as_vector().unwrap();
        let pt = ent.partial_transpose(Slot::Second);
        assert!(seesaw::rayleigh(pt.matrix(), &xi) < 0.0);
    }

}
