//! Generalized Choi-matrix transforms of linear maps between matrix
//! algebras, driven by non-degenerate bilinear forms, together with
//! cone-membership oracles and an identity-verification engine.

pub mod cones;
pub mod error;
pub mod forms;
pub mod json;
pub mod linalg;
pub mod maps;
pub mod sample;
pub mod verify;
pub mod tol;

pub use cones::{ConeVerdict, Status};
pub use error::{Error, Result};
pub use forms::{BasisFamily, BilinearForm};
pub use linalg::{kron, BipartiteOperator, ComplexMatrix, Slot};
pub use maps::{Isomorphism, LinearMapRep};
pub use num_complex::Complex64;
