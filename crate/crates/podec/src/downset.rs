//! Symbolic localization, support and canonical primary decomposition for
//! downsets over orthant-ordered groups, represented as finite unions of
//! coprincipal pieces `a + tau - Q+`.
//!
//! The closed formulas on the piece representation (localization keeps the
//! pieces whose face contains `tau`, supports are differences of piece
//! unions) are derived facts about this representation, not definitions, so
//! each one is property-tested against the grid oracle in `oracle`.

use crate::bounds::{Coord, Lower, Upper};
use crate::cone::ConePresentation;
use crate::region::{GeneralizedBox, Region, RegionError};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DownsetError {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("face indices {0:?} are not coordinates of the lattice")]
    FaceNotInLattice(Vec<usize>),
    #[error("downset calculus requires an orthant group")]
    NotOrthant,
    #[error("strict upper bound survived down-closure")]
    OpenUpperBound,
    #[error("canonical components do not cover the downset (internal invariant violated)")]
    DecompositionUnionMismatch,
    #[error(transparent)]
    Region(#[from] RegionError),
}

/// The coprincipal downset `a + tau - Q+`: all points `q` with
/// `q_i <= a_i` for every coordinate `i` outside the characteristic set.
///
/// Canonical form stores `0` in the coordinates of the characteristic set,
/// since those apex entries are irrelevant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoprincipalPiece<C> {
    pub apex: Vec<C>,
    pub face: BTreeSet<usize>,
}

impl<C: Coord> CoprincipalPiece<C> {
    pub fn new(mut apex: Vec<C>, face: BTreeSet<usize>) -> Self {
        for &i in &face {
            apex[i] = C::zero();
        }
        CoprincipalPiece { apex, face }
    }

    pub fn rank(&self) -> usize {
        self.apex.len()
    }

    pub fn contains(&self, q: &[C]) -> bool {
        q.iter()
            .enumerate()
            .all(|(i, x)| self.face.contains(&i) || *x <= self.apex[i])
    }

    /// The piece as a single generalized box.
    pub fn to_box(&self) -> GeneralizedBox<C> {
        GeneralizedBox::new(
            self.apex
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let hi = if self.face.contains(&i) {
                        Upper::PosInf
                    } else {
                        Upper::Incl(a.clone())
                    };
                    (Lower::NegInf, hi)
                })
                .collect(),
        )
    }

    /// Piece containment: `P_i` is inside `P_j` iff the faces are nested and
    /// the apexes dominate outside the bigger face.
    fn inside(&self, other: &Self) -> bool {
        self.face.is_subset(&other.face)
            && self
                .apex
                .iter()
                .enumerate()
                .all(|(i, a)| other.face.contains(&i) || self.face.contains(&i) || *a <= other.apex[i])
    }
}

/// A downset given as a finite union of coprincipal pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DownsetExpr<C> {
    group: ConePresentation,
    pieces: Vec<CoprincipalPiece<C>>,
}

/// Faces of the orthant in canonical order: characteristic sets sorted by
/// size, then lexicographically.
pub fn orthant_faces(n: usize) -> Vec<BTreeSet<usize>> {
    let mut faces: Vec<BTreeSet<usize>> = (0u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    faces.sort_by_key(|s| (s.len(), s.iter().cloned().collect::<Vec<_>>()));
    faces
}

impl<C: Coord> DownsetExpr<C> {
    /// Build and normalize. The group must be an orthant kind.
    pub fn new(
        group: ConePresentation,
        pieces: Vec<CoprincipalPiece<C>>,
    ) -> Result<Self, DownsetError> {
        if !group.is_orthant() {
            return Err(DownsetError::NotOrthant);
        }
        let n = group.rank();
        for p in &pieces {
            if p.rank() != n {
                return Err(DownsetError::RankMismatch { expected: n, got: p.rank() });
            }
            if let Some(&i) = p.face.iter().find(|&&i| i >= n) {
                return Err(DownsetError::FaceNotInLattice(vec![i]));
            }
        }
        let mut d = DownsetExpr { group, pieces };
        d.normalize_in_place();
        Ok(d)
    }

    pub fn empty(group: ConePresentation) -> Result<Self, DownsetError> {
        Self::new(group, Vec::new())
    }

    pub fn group(&self) -> &ConePresentation {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn pieces(&self) -> &[CoprincipalPiece<C>] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    fn check_face(&self, tau: &BTreeSet<usize>) -> Result<(), DownsetError> {
        let bad: Vec<usize> = tau.iter().filter(|&&i| i >= self.rank()).cloned().collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(DownsetError::FaceNotInLattice(bad))
        }
    }

    /// Remove dominated pieces, canonicalize apexes, fix the order.
    fn normalize_in_place(&mut self) {
        let canon: Vec<CoprincipalPiece<C>> = self
            .pieces
            .iter()
            .map(|p| CoprincipalPiece::new(p.apex.clone(), p.face.clone()))
            .collect();
        let mut keep: Vec<CoprincipalPiece<C>> = Vec::new();
        for (i, p) in canon.iter().enumerate() {
            let dominated = canon.iter().enumerate().any(|(j, q)| {
                if i == j {
                    return false;
                }
                // Strict domination, with index tie-break for duplicates.
                p.inside(q) && (!q.inside(p) || j < i)
            });
            if !dominated {
                keep.push(p.clone());
            }
        }
        keep.sort_by_key(|p| {
            (p.face.len(), p.face.iter().cloned().collect::<Vec<_>>(), p.apex.clone())
        });
        keep.dedup();
        self.pieces = keep;
    }

    pub fn normalize(&self) -> Self {
        let mut d = self.clone();
        d.normalize_in_place();
        d
    }

    pub fn member(&self, q: &[C]) -> Result<bool, DownsetError> {
        if q.len() != self.rank() {
            return Err(DownsetError::RankMismatch { expected: self.rank(), got: q.len() });
        }
        Ok(self.pieces.iter().any(|p| p.contains(q)))
    }

    /// The denoted set as a region.
    pub fn to_region(&self) -> Region<C> {
        Region::from_boxes(self.rank(), self.pieces.iter().map(|p| p.to_box()).collect())
            .expect("piece ranks are validated")
    }

    fn union_region(&self, filter: impl Fn(&CoprincipalPiece<C>) -> bool) -> Region<C> {
        Region::from_boxes(
            self.rank(),
            self.pieces.iter().filter(|p| filter(p)).map(|p| p.to_box()).collect(),
        )
        .expect("piece ranks are validated")
    }

    /// Localization `D_tau = {q in D : q + tau inside D}`.
    ///
    /// On the piece representation this is the sub-union of pieces whose
    /// face contains `tau`: a piece with smaller face is bounded in some
    /// `tau` direction, and a point escaping every piece infinitely often
    /// along `tau` escapes `D` by pigeonhole.
    pub fn localize(&self, tau: &BTreeSet<usize>) -> Result<Self, DownsetError> {
        self.check_face(tau)?;
        let pieces =
            self.pieces.iter().filter(|p| tau.is_subset(&p.face)).cloned().collect();
        DownsetExpr::new(self.group.clone(), pieces)
    }

    /// The part of `D` globally supported on `tau`: points of `D` not in
    /// any localization `D_tau'` for `tau'` not inside `tau`.  Via the ray
    /// reduction this is the union of small-face pieces minus the union of
    /// the other pieces.
    pub fn global_support(&self, tau: &BTreeSet<usize>) -> Result<Region<C>, DownsetError> {
        self.check_face(tau)?;
        let small = self.union_region(|p| p.face.is_subset(tau));
        let big = self.union_region(|p| !p.face.is_subset(tau));
        Ok(small.difference(&big)?)
    }

    /// Local `tau`-support: the global `tau`-support of the localization.
    pub fn local_support(&self, tau: &BTreeSet<usize>) -> Result<Region<C>, DownsetError> {
        self.localize(tau)?.global_support(tau)
    }

    /// The `tau`-primary component: the down-closure of the local
    /// `tau`-support, converted back to coprincipal pieces.
    pub fn primary_component(&self, tau: &BTreeSet<usize>) -> Result<Self, DownsetError> {
        let closed = self.local_support(tau)?.down_closure();
        let mut pieces = Vec::new();
        for b in closed.boxes() {
            let mut apex = Vec::with_capacity(self.rank());
            let mut face = BTreeSet::new();
            for (i, (_, hi)) in b.intervals.iter().enumerate() {
                match hi {
                    Upper::PosInf => {
                        face.insert(i);
                        apex.push(C::zero());
                    }
                    Upper::Incl(c) => apex.push(c.clone()),
                    Upper::Excl(_) => return Err(DownsetError::OpenUpperBound),
                }
            }
            pieces.push(CoprincipalPiece::new(apex, face));
        }
        DownsetExpr::new(self.group.clone(), pieces)
    }

    /// Canonical primary decomposition: one component for every face with
    /// nonempty local support, in face order.  The union of the components
    /// is checked to equal `D` before returning.
    pub fn canonical_decomposition(
        &self,
    ) -> Result<Vec<(BTreeSet<usize>, Self)>, DownsetError> {
        let mut components = Vec::new();
        for tau in orthant_faces(self.rank()) {
            if self.local_support(&tau)?.is_empty() {
                continue;
            }
            let comp = self.primary_component(&tau)?;
            components.push((tau, comp));
        }
        let mut union = Region::empty(self.rank());
        for (_, comp) in &components {
            union = union.union(&comp.to_region())?;
        }
        if !union.equals(&self.to_region())? {
            return Err(DownsetError::DecompositionUnionMismatch);
        }
        Ok(components)
    }

    /// Greedy removal of redundant components, in the fixed face order.
    /// The surviving list still covers `D`.
    pub fn prune_redundant(
        &self,
        components: &[(BTreeSet<usize>, Self)],
    ) -> Result<Vec<(BTreeSet<usize>, Self)>, DownsetError> {
        let target = self.to_region();
        let mut kept: Vec<(BTreeSet<usize>, Self)> = components.to_vec();
        let mut i = 0;
        while i < kept.len() {
            let mut union = Region::empty(self.rank());
            for (j, (_, comp)) in kept.iter().enumerate() {
                if j != i {
                    union = union.union(&comp.to_region())?;
                }
            }
            if union.equals(&target)? {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(kept)
    }

    /// If `D` equals one of its own primary components, return that face.
    pub fn coprimary_face(&self) -> Result<Option<BTreeSet<usize>>, DownsetError> {
        let region = self.to_region();
        for tau in orthant_faces(self.rank()) {
            if region.equals(&self.primary_component(&tau)?.to_region())? {
                return Ok(Some(tau));
            }
        }
        Ok(None)
    }
}

/// Shorthand for integer downsets used across the crate's tests and fixtures.
pub type IntDownset = DownsetExpr<i64>;

pub fn piece(apex: &[i64], face: &[usize]) -> CoprincipalPiece<i64> {
    CoprincipalPiece::new(apex.to_vec(), face.iter().cloned().collect())
}

pub fn int_downset(n: usize, pieces: Vec<CoprincipalPiece<i64>>) -> IntDownset {
    DownsetExpr::new(ConePresentation::orthant_int(n), pieces).unwrap()
}

/// Worked fixture: `{x <= 0} u {x <= 1, y <= 0}`.
pub fn fixture_e1() -> IntDownset {
    int_downset(2, vec![piece(&[0, 0], &[1]), piece(&[1, 0], &[])])
}

/// Worked fixture: `{y <= 0} u {x <= 0} u {x <= 2, y <= 2}`.
pub fn fixture_e2() -> IntDownset {
    int_downset(2, vec![piece(&[0, 0], &[0]), piece(&[0, 0], &[1]), piece(&[2, 2], &[])])
}
