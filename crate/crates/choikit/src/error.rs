use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian: max |h - h*| = {deviation:.3e} exceeds {threshold:.3e}")]
    NotHermitian { deviation: f64, threshold: f64 },

    #[error("basis family is singular: {0}")]
    SingularBasis(String),

    #[error("bilinear form is degenerate: {0}")]
    SingularForm(String),

    #[error("transfer matrix is singular; not an isomorphism")]
    SingularIsomorphism,

    #[error("bilinear form is not symmetric")]
    NotSymmetric,

    #[error("numerical breakdown: best candidate self-pairing {0:.3e} below breakdown tolerance")]
    NumericalBreakdown(f64),

    #[error("invalid Schmidt parameter k = {k}: must satisfy 1 <= k <= {max}")]
    InvalidK { k: usize, max: usize },

    #[error("operator is not positive semidefinite: min eigenvalue {0:.3e}")]
    NotPsd(f64),

    #[error("matrix s is singular")]
    SingularS,

    #[error("invalid data: {0}")]
    InvalidData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
