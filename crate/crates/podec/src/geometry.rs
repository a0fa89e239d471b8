//! Downsets over general pointed rational polyhedral cones.
//!
//! Pieces here are coprincipal sets `a + tau - Q+` for a face `tau` of a
//! cone lattice.  Membership is decided by exact rational feasibility;
//! localization uses the same sub-union formula as the orthant calculus but
//! is gated on a proven closedness flag, because its correctness argument
//! needs complements of faces to be generated by rays.  Supports over
//! general cones are computed on finite grids only: down-closures of grid
//! differences are not axis-aligned here, so there is no symbolic component
//! path.

use crate::cone::{dot, Closedness, ConeError, ConePresentation, FaceLattice};
use crate::fm::{self, FmError, DEFAULT_ROW_BUDGET};
use crate::oracle::{GridBox, GridSet};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("face id {0} is not in the lattice")]
    FaceNotInLattice(usize),
    #[error("cone closedness is not proven; localization formula refused")]
    NotProvenClosed,
    #[error("grid box does not clear the apexes by the margin in coordinate {0}")]
    BoxTooSmall(usize),
    #[error(transparent)]
    Fm(#[from] FmError),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// The coprincipal downset `a + tau - Q+` over a general cone lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralPiece {
    pub apex: Vec<i64>,
    pub face_id: usize,
}

fn check_face(lattice: &FaceLattice, face_id: usize) -> Result<(), GeometryError> {
    if face_id < lattice.faces.len() {
        Ok(())
    } else {
        Err(GeometryError::FaceNotInLattice(face_id))
    }
}

/// Rows constraining the variable vector `t` to lie on the face: inside the
/// cone and tight on the face's supporting normals.
fn face_rows(lattice: &FaceLattice, face_id: usize, halfspaces: &[Vec<i64>]) -> Vec<fm::Row> {
    let n = lattice.cone.rank();
    let mut rows = Vec::new();
    for h in halfspaces {
        let mut r = fm::bigs(h);
        r.push(BigInt::from(0));
        rows.push(r);
    }
    for &s in &lattice.faces[face_id].supporting_normals {
        let coeffs = fm::bigs(&halfspaces[s]);
        rows.extend(fm::equality(&coeffs, BigInt::from(0)));
    }
    let _ = n;
    rows
}

/// Does `q` lie in `a + tau - Q+`?
///
/// Feasibility of `q = a + t - p` with `t` on the face and `p` in the cone,
/// eliminating `t`.  A rational solution yields an integer one: scaling `t`
/// by a positive integer keeps it on the face and moves `p` further into
/// the cone by a face vector, so rational feasibility is exact for the
/// integer question.
pub fn piece_member(
    lattice: &FaceLattice,
    piece: &GeneralPiece,
    q: &[i64],
) -> Result<bool, GeometryError> {
    let n = lattice.cone.rank();
    if q.len() != n || piece.apex.len() != n {
        return Err(GeometryError::RankMismatch {
            expected: n,
            got: if q.len() != n { q.len() } else { piece.apex.len() },
        });
    }
    check_face(lattice, piece.face_id)?;
    let halfspaces = lattice.cone.halfspaces();
    let mut rows = face_rows(lattice, piece.face_id, &halfspaces);
    // p = a + t - q must satisfy every halfspace: h.t + h.(a - q) >= 0.
    for h in &halfspaces {
        let mut r = fm::bigs(h);
        let shift: i128 = dot(h, &piece.apex) - dot(h, q);
        r.push(BigInt::from(shift));
        rows.push(r);
    }
    Ok(fm::feasible(rows, n, DEFAULT_ROW_BUDGET)?)
}

/// Is the integer vector `g` in the recession cone `tau - Q+` of a piece
/// with this face?  Feasibility of `g = t - p` as above.
pub fn recession_contains(
    lattice: &FaceLattice,
    face_id: usize,
    g: &[i64],
) -> Result<bool, GeometryError> {
    check_face(lattice, face_id)?;
    let n = lattice.cone.rank();
    let halfspaces = lattice.cone.halfspaces();
    let mut rows = face_rows(lattice, face_id, &halfspaces);
    for h in &halfspaces {
        let mut r = fm::bigs(h);
        let shift: i128 = -dot(h, g);
        r.push(BigInt::from(shift));
        rows.push(r);
    }
    Ok(fm::feasible(rows, n, DEFAULT_ROW_BUDGET)?)
}

/// Membership in the union of pieces.
pub fn union_member(
    lattice: &FaceLattice,
    pieces: &[GeneralPiece],
    q: &[i64],
) -> Result<bool, GeometryError> {
    for p in pieces {
        if piece_member(lattice, p, q)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Localization of a piece union along a face: the sub-union of pieces
/// whose face contains `tau`.  Refuses to run unless the cone's closedness
/// is proven, since the formula's correctness argument requires it.
pub fn localize_general(
    lattice: &FaceLattice,
    pieces: &[GeneralPiece],
    tau: usize,
) -> Result<Vec<GeneralPiece>, GeometryError> {
    if lattice.closed != Closedness::Proven {
        return Err(GeometryError::NotProvenClosed);
    }
    check_face(lattice, tau)?;
    Ok(pieces
        .iter()
        .filter(|p| lattice.face_leq(tau, p.face_id))
        .cloned()
        .collect())
}

/// An interior integer point of the face: the sum of its ray generators
/// (zero for the trivial face).
pub fn interior_point(lattice: &FaceLattice, face_id: usize) -> Result<Vec<i64>, GeometryError> {
    check_face(lattice, face_id)?;
    let n = lattice.cone.rank();
    let mut g = vec![0i64; n];
    for &gid in &lattice.faces[face_id].generator_ids {
        for i in 0..n {
            g[i] += lattice.ray_generators[gid][i];
        }
    }
    Ok(g)
}

/// Definition-chasing localization test at one point: does `q + k g` stay
/// in the union for every `k >= 0`, where `g` is an interior point of the
/// face?  Membership along the push is monotone (the union is a downset and
/// `g` is in the cone), so the point survives forever iff a single piece
/// both contains `q` and has `g` in its recession cone.
pub fn push_survives(
    lattice: &FaceLattice,
    pieces: &[GeneralPiece],
    tau: usize,
    q: &[i64],
) -> Result<bool, GeometryError> {
    let g = interior_point(lattice, tau)?;
    for p in pieces {
        if recession_contains(lattice, p.face_id, &g)? && piece_member(lattice, p, q)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn check_margin(
    pieces: &[GeneralPiece],
    grid: &GridBox,
    margin: i64,
) -> Result<(), GeometryError> {
    for i in 0..grid.rank() {
        for p in pieces {
            if grid.hi[i] < p.apex[i] + margin || grid.lo[i] > p.apex[i] - margin {
                return Err(GeometryError::BoxTooSmall(i));
            }
        }
    }
    Ok(())
}

/// Tabulate a piece union on a grid.
pub fn tabulate(
    lattice: &FaceLattice,
    pieces: &[GeneralPiece],
    grid: &GridBox,
) -> Result<GridSet, GeometryError> {
    let mut set = GridSet::empty(grid.clone());
    for p in grid.points() {
        let m = union_member(lattice, pieces, &p)?;
        set.set(&p, m);
    }
    Ok(set)
}

/// Grid global support at `tau`: box points of the union lying in no
/// localization at a face not contained in `tau`.
pub fn grid_global_support_general(
    lattice: &FaceLattice,
    pieces: &[GeneralPiece],
    tau: usize,
    grid: &GridBox,
    margin: i64,
) -> Result<GridSet, GeometryError> {
    check_face(lattice, tau)?;
    check_margin(pieces, grid, margin)?;
    let mut out = tabulate(lattice, pieces, grid)?;
    for sigma in 0..lattice.faces.len() {
        if lattice.face_leq(sigma, tau) {
            continue;
        }
        let loc = localize_general(lattice, pieces, sigma)?;
        out = out.difference(&tabulate(lattice, &loc, grid)?);
    }
    Ok(out)
}

/// Grid local support at `tau`: global support of the localization.
pub fn grid_local_support_general(
    lattice: &FaceLattice,
    pieces: &[GeneralPiece],
    tau: usize,
    grid: &GridBox,
    margin: i64,
) -> Result<GridSet, GeometryError> {
    let loc = localize_general(lattice, pieces, tau)?;
    grid_global_support_general(lattice, &loc, tau, grid, margin)
}

/// The cone over a regular `m`-gon at height one (rational vertex
/// coordinates), for `m` in {3, 4, 6}.
pub fn mgon_cone(m: usize) -> Result<ConePresentation, ConeError> {
    let verts: Vec<Vec<i64>> = match m {
        3 => vec![vec![2, 0, 1], vec![-1, 2, 1], vec![-1, -2, 1]],
        4 => vec![vec![1, 1, 1], vec![-1, 1, 1], vec![-1, -1, 1], vec![1, -1, 1]],
        6 => vec![
            vec![2, 0, 1],
            vec![1, 2, 1],
            vec![-1, 2, 1],
            vec![-2, 0, 1],
            vec![-1, -2, 1],
            vec![1, -2, 1],
        ],
        _ => panic!("only m in {{3, 4, 6}} supported"),
    };
    ConePresentation::cone_from_generators(3, verts)
}
