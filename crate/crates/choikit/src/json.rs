//! Wire formats.
//!
//! Complex scalars are `[re, im]` pairs. Matrices are row-major:
//! `{"rows": r, "cols": c, "entries": [[re, im], ...]}`. Every other
//! object embeds this matrix format.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{BipartiteOperator, ComplexMatrix};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixDto {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<ComplexMatrix> for MatrixDto {
    fn from(m: ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<MatrixDto> for ComplexMatrix {
    type Error = Error;

    fn try_from(dto: MatrixDto) -> Result<Self, Error> {
        ComplexMatrix::new(
            dto.rows,
            dto.cols,
            dto.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BipartiteDto {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    pub matrix: MatrixDto,
}

impl From<BipartiteOperator> for BipartiteDto {
    fn from(x: BipartiteOperator) -> Self {
        Self { dim_a: x.dim_a(), dim_b: x.dim_b(), matrix: x.into_matrix().into() }
    }
}

impl TryFrom<BipartiteDto> for BipartiteOperator {
    type Error = Error;

    fn try_from(dto: BipartiteDto) -> Result<Self, Error> {
        BipartiteOperator::new(dto.dim_a, dto.dim_b, dto.matrix.try_into()?)
    }
}

/// Basis element on the wire: either a plain coordinate vector of
/// `[re, im]` pairs or a matrix (vec'd row-major on parse).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisElementDto {
    Vector(Vec<[f64; 2]>),
    Matrix(MatrixDto),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisDto {
    pub dim: usize,
    pub elements: Vec<BasisElementDto>,
}

impl From<crate::forms::BasisFamily> for BasisDto {
    fn from(b: crate::forms::BasisFamily) -> Self {
        Self {
            dim: b.dim(),
            elements: b
                .elements()
                .iter()
                .map(|e| BasisElementDto::Vector(e.iter().map(|z| [z.re, z.im]).collect()))
                .collect(),
        }
    }
}

impl TryFrom<BasisDto> for crate::forms::BasisFamily {
    type Error = Error;

    fn try_from(dto: BasisDto) -> Result<Self, Error> {
        let mut elements = Vec::with_capacity(dto.elements.len());
        for e in dto.elements {
            match e {
                BasisElementDto::Vector(v) => {
                    elements.push(v.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                }
                BasisElementDto::Matrix(m) => {
                    let m: ComplexMatrix = m.try_into()?;
                    elements.push(m.vec())
                }
            }
        }
        let family = crate::forms::BasisFamily::new(elements)?;
        if family.dim() != dto.dim {
            return Err(Error::InvalidData(format!(
                "basis dim {} does not match element count {}",
                dto.dim,
                family.dim()
            )));
        }
        Ok(family)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapDto {
    #[serde(rename = "dimIn")]
    pub dim_in: usize,
    #[serde(rename = "dimOut")]
    pub dim_out: usize,
    pub transfer: MatrixDto,
}

impl From<crate::maps::LinearMapRep> for MapDto {
    fn from(m: crate::maps::LinearMapRep) -> Self {
        Self {
            dim_in: m.dim_in(),
            dim_out: m.dim_out(),
            transfer: m.transfer().clone().into(),
        }
    }
}

impl TryFrom<MapDto> for crate::maps::LinearMapRep {
    type Error = Error;

    fn try_from(dto: MapDto) -> Result<Self, Error> {
        crate::maps::LinearMapRep::new(dto.dim_in, dto.dim_out, dto.transfer.try_into()?)
    }
}

impl From<crate::maps::Isomorphism> for MapDto {
    fn from(iso: crate::maps::Isomorphism) -> Self {
        crate::maps::LinearMapRep::from(iso).into()
    }
}

impl TryFrom<MapDto> for crate::maps::Isomorphism {
    type Error = Error;

    fn try_from(dto: MapDto) -> Result<Self, Error> {
        crate::maps::Isomorphism::new(dto.try_into()?)
    }
}

/// A map file on disk: either a transfer-matrix object or a named built-in
/// ("id"/"transpose" with `dim`, or "ad" with the matrix `s`).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapFileDto {
    Transfer(MapDto),
    Named(NamedMapDto),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedMapDto {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<MatrixDto>,
}

impl TryFrom<MapFileDto> for crate::maps::LinearMapRep {
    type Error = Error;

    fn try_from(dto: MapFileDto) -> Result<Self, Error> {
        match dto {
            MapFileDto::Transfer(m) => m.try_into(),
            MapFileDto::Named(n) => match n.name.as_str() {
                "id" => {
                    let dim = n.dim.ok_or_else(|| {
                        Error::InvalidData("named map \"id\" needs a dim".into())
                    })?;
                    Ok(crate::maps::LinearMapRep::identity(dim))
                }
                "transpose" => {
                    let dim = n.dim.ok_or_else(|| {
                        Error::InvalidData("named map \"transpose\" needs a dim".into())
                    })?;
                    Ok(crate::maps::LinearMapRep::transpose_map(dim))
                }
                "ad" => {
                    let s = n.s.ok_or_else(|| {
                        Error::InvalidData("named map \"ad\" needs the matrix s".into())
                    })?;
                    let s: ComplexMatrix = s.try_into()?;
                    crate::maps::LinearMapRep::ad(&s)
                }
                other => Err(Error::InvalidData(format!("unknown named map {other:?}"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn matrix_json_roundtrip_exact() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, -2.0), c(0.1 + 0.2, 0.0), c(std::f64::consts::PI, 1e-17), c(0.0, -0.0)],
        )
        .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back.entries(), m.entries());
    }

    #[test]
    fn matrix_json_shape() {
        let m = ComplexMatrix::matrix_unit(2, 0, 1);
        let v: serde_json::Value = serde_json::to_value(&m).unwrap();
        assert_eq!(v["rows"], 2);
        assert_eq!(v["cols"], 2);
        assert_eq!(v["entries"][1][0], 1.0);
    }

    #[test]
    fn bad_matrix_json_rejected() {
        let bad = r#"{"rows": 2, "cols": 2, "entries": [[1.0, 0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
    }
}
