//! JSON schemas for cones, regions, downsets and hull modules.
//!
//! Serialization is canonical and byte-stable: struct field order is fixed,
//! rationals print as reduced `p/q` strings (plain `p` when integral), and
//! `null` encodes an infinite region endpoint.  Parsing validates indices
//! and support conditions and reports the offending field.

use crate::bounds::{Lower, Upper};
use crate::cone::ConePresentation;
use crate::downset::{CoprincipalPiece, DownsetExpr, IntDownset};
use crate::linalg::Rat;
use crate::module::{Generator, HullPresentation};
use crate::oracle::GridBox;
use crate::region::{GeneralizedBox, Region};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("torsion groups are not supported; use an orthant or cone-int group")]
    Torsion,
}

fn invalid(msg: impl Into<String>) -> IoError {
    IoError::Invalid(msg.into())
}

// ---------------------------------------------------------------- cones --

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeDto {
    pub kind: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<Vec<i64>>>,
}

pub fn cone_from_dto(dto: &ConeDto) -> Result<ConePresentation, IoError> {
    match dto.kind.as_str() {
        "orthant-int" => Ok(ConePresentation::orthant_int(dto.n)),
        "orthant-rat" => Ok(ConePresentation::orthant_rat(dto.n)),
        "cone-int" => {
            if let Some(gens) = &dto.generators {
                ConePresentation::cone_from_generators(dto.n, gens.clone())
                    .map_err(|e| invalid(format!("generators: {e}")))
            } else if let Some(hs) = &dto.halfspaces {
                ConePresentation::cone_from_halfspaces(dto.n, hs.clone())
                    .map_err(|e| invalid(format!("halfspaces: {e}")))
            } else {
                Err(invalid("cone-int needs \"generators\" or \"halfspaces\""))
            }
        }
        "torsion" => Err(IoError::Torsion),
        other => Err(invalid(format!(
            "kind: unknown group kind {other:?} (expected orthant-int, orthant-rat or cone-int)"
        ))),
    }
}

pub fn cone_to_dto(cone: &ConePresentation) -> ConeDto {
    match cone {
        ConePresentation::OrthantInt { n } => ConeDto {
            kind: "orthant-int".into(),
            n: *n,
            generators: None,
            halfspaces: None,
        },
        ConePresentation::OrthantRat { n } => ConeDto {
            kind: "orthant-rat".into(),
            n: *n,
            generators: None,
            halfspaces: None,
        },
        ConePresentation::ConeInt { n, generators, halfspaces } => ConeDto {
            kind: "cone-int".into(),
            n: *n,
            generators: Some(generators.clone()),
            halfspaces: Some(halfspaces.clone()),
        },
    }
}

// -------------------------------------------------------------- regions --

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoxDto {
    pub lo: Vec<Option<i64>>,
    pub hi: Vec<Option<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionDto {
    pub boxes: Vec<BoxDto>,
}

pub fn region_to_dto(region: &Region<i64>) -> RegionDto {
    let boxes = region
        .boxes()
        .iter()
        .map(|b| {
            let mut lo = Vec::new();
            let mut hi = Vec::new();
            for (l, h) in &b.intervals {
                lo.push(match l {
                    Lower::NegInf => None,
                    Lower::Incl(c) => Some(*c),
                    Lower::Excl(c) => Some(c + 1),
                });
                hi.push(match h {
                    Upper::PosInf => None,
                    Upper::Incl(c) => Some(*c),
                    Upper::Excl(c) => Some(c - 1),
                });
            }
            BoxDto { lo, hi }
        })
        .collect();
    RegionDto { boxes }
}

pub fn region_from_dto(rank: usize, dto: &RegionDto) -> Result<Region<i64>, IoError> {
    let mut boxes = Vec::new();
    for (i, b) in dto.boxes.iter().enumerate() {
        if b.lo.len() != rank || b.hi.len() != rank {
            return Err(invalid(format!(
                "boxes[{i}]: expected {rank} coordinates, got lo {} / hi {}",
                b.lo.len(),
                b.hi.len()
            )));
        }
        boxes.push(crate::region::int_box(&b.lo, &b.hi));
    }
    Region::from_boxes(rank, boxes).map_err(|e| invalid(e.to_string()))
}

// ------------------------------------------------------------- downsets --

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceDto {
    pub apex: Vec<i64>,
    pub face: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DownsetDto {
    pub group: ConeDto,
    pub pieces: Vec<PieceDto>,
}

pub fn downset_from_dto(dto: &DownsetDto) -> Result<IntDownset, IoError> {
    let group = cone_from_dto(&dto.group)?;
    if !group.is_orthant() {
        return Err(invalid("group: the downset calculus requires an orthant group"));
    }
    let n = group.rank();
    let mut pieces = Vec::new();
    for (i, p) in dto.pieces.iter().enumerate() {
        if p.apex.len() != n {
            return Err(invalid(format!(
                "pieces[{i}].apex: expected {n} coordinates, got {}",
                p.apex.len()
            )));
        }
        if let Some(&bad) = p.face.iter().find(|&&f| f >= n) {
            return Err(invalid(format!(
                "pieces[{i}].face: coordinate index {bad} out of range for rank {n}"
            )));
        }
        pieces.push(CoprincipalPiece::new(p.apex.clone(), p.face.iter().cloned().collect()));
    }
    DownsetExpr::new(group, pieces).map_err(|e| invalid(e.to_string()))
}

pub fn downset_to_dto(d: &IntDownset) -> DownsetDto {
    DownsetDto {
        group: cone_to_dto(d.group()),
        pieces: d
            .pieces()
            .iter()
            .map(|p| PieceDto {
                apex: p.apex.clone(),
                face: p.face.iter().cloned().collect(),
            })
            .collect(),
    }
}

// -------------------------------------------------------------- modules --

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorDto {
    pub degree: Vec<i64>,
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridBoxDto {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleDto {
    pub hull: Vec<DownsetDto>,
    pub generators: Vec<GeneratorDto>,
    #[serde(rename = "box")]
    pub grid: GridBoxDto,
}

/// Parse a reduced-or-not rational written as `p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rat, IoError> {
    let parse_int = |t: &str| {
        BigInt::from_str(t).map_err(|_| invalid(format!("invalid rational {s:?}")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den == BigInt::from(0) {
                return Err(invalid(format!("invalid rational {s:?}: zero denominator")));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
    }
}

/// Canonical string form: reduced, `p` when integral, else `p/q`.
pub fn rational_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn module_from_dto(dto: &ModuleDto) -> Result<HullPresentation, IoError> {
    let hull: Vec<IntDownset> =
        dto.hull.iter().map(downset_from_dto).collect::<Result<_, _>>()?;
    let grid = GridBox::new(dto.grid.lo.clone(), dto.grid.hi.clone())
        .map_err(|e| invalid(format!("box: {e}")))?;
    let mut generators = Vec::new();
    for (i, g) in dto.generators.iter().enumerate() {
        let mut coeffs = Vec::new();
        for (j, c) in g.coeffs.iter().enumerate() {
            coeffs.push(
                parse_rational(c)
                    .map_err(|e| invalid(format!("generators[{i}].coeffs[{j}]: {e}")))?,
            );
        }
        generators.push(Generator { degree: g.degree.clone(), coeffs });
    }
    Ok(HullPresentation { hull, generators, grid })
}

pub fn module_to_dto(h: &HullPresentation) -> ModuleDto {
    ModuleDto {
        hull: h.hull.iter().map(downset_to_dto).collect(),
        generators: h
            .generators
            .iter()
            .map(|g| GeneratorDto {
                degree: g.degree.clone(),
                coeffs: g.coeffs.iter().map(rational_to_string).collect(),
            })
            .collect(),
        grid: GridBoxDto { lo: h.grid.lo.clone(), hi: h.grid.hi.clone() },
    }
}

// ---------------------------------------------------------------- faces --

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceDto {
    pub id: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub char_set: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tight: Option<Vec<usize>>,
    pub dim: usize,
}

pub fn faces_to_dtos(lattice: &crate::cone::FaceLattice) -> Vec<FaceDto> {
    let orthant = lattice.cone.is_orthant();
    lattice
        .faces
        .iter()
        .map(|f| FaceDto {
            id: f.id,
            char_set: orthant.then(|| f.char_set.iter().cloned().collect()),
            tight: (!orthant).then(|| f.supporting_normals.iter().cloned().collect()),
            dim: f.dim,
        })
        .collect()
}

// ------------------------------------------------------- decompositions --

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DownsetComponentDto {
    pub face: Vec<usize>,
    pub pieces: Vec<PieceDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DownsetDecompositionDto {
    pub components: Vec<DownsetComponentDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleComponentDto {
    pub face: Vec<usize>,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleDecompositionDto {
    pub components: Vec<ModuleComponentDto>,
    pub kernel_intersection_dims: Vec<usize>,
}

/// Canonical text form: pretty JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Emit a generalized box's interval in the piece style used by tests.
pub fn piece_of_box(b: &GeneralizedBox<i64>) -> Option<PieceDto> {
    let mut apex = Vec::new();
    let mut face = Vec::new();
    for (i, (_, hi)) in b.intervals.iter().enumerate() {
        match hi {
            Upper::PosInf => {
                face.push(i);
                apex.push(0);
            }
            Upper::Incl(c) => apex.push(*c),
            Upper::Excl(c) => apex.push(c - 1),
        }
    }
    Some(PieceDto { apex, face })
}
