//! Default numerical tolerances.
//!
//! All tolerances are relative: a residual `r` passes against a reference
//! scale `s` when `r <= tol * max(1, s)`. Chosen for `f64` at dimensions
//! up to 64.

/// Hermiticity check: max |h - h*| relative to max(1, ||h||).
pub const HERM: f64 = 1e-10;
/// Eigendecomposition reconstruction ||VΛV* - h|| / ||h||.
pub const EIG: f64 = 1e-9;
/// Positive semidefiniteness: min eigenvalue >= -PSD * max(1, ||h||).
pub const PSD: f64 = 1e-9;
/// Numerical rank: singular values above RANK * (largest singular value).
pub const RANK: f64 = 1e-10;
/// Generic identity residuals (Table 1, dual-path Choi checks).
pub const IDENTITY: f64 = 1e-10;
/// Longer computation chains (tensor-push identity of the twisted adjoint).
pub const CHAIN: f64 = 1e-9;
/// Orthonormal basis construction for symmetric forms.
pub const ORTHO: f64 = 1e-8;
/// Self-pairing magnitude below which a symmetric form is treated as
/// numerically degenerate on the current complement.
pub const BREAKDOWN: f64 = 1e-10;
/// Block-positivity violation threshold for see-saw witnesses.
pub const BLOCKPOS: f64 = 1e-8;
/// Schmidt decomposition acceptance: residual < SCHMIDT_FIT * ||C||.
pub const SCHMIDT_FIT: f64 = 1e-7;
/// Ad_s recovery: ||Ad_recovered - sigma|| relative.
pub const AD_RECOVERY: f64 = 1e-8;
/// See-saw convergence: stop when the objective improves by less than this.
pub const SEESAW_IMPROVE: f64 = 1e-12;
