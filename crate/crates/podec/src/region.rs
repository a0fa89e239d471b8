//! Exact Boolean algebra and down-closure for finite unions of axis-aligned
//! generalized boxes.
//!
//! A [`Region`] is kept in normal form: pairwise-disjoint nonempty boxes in a
//! deterministic order.  All set operations are exact; over the integers no
//! open endpoints survive normalization, over the rationals endpoints carry
//! open/closed flags.

use crate::bounds::{
    cmp_lower, cmp_upper, complement_of_lower, complement_of_upper, interval_nonempty, lower_max,
    upper_min, Coord, Lower, Upper,
};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegionError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
}

/// Product of per-coordinate intervals, possibly unbounded on either end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedBox<C> {
    pub intervals: Vec<(Lower<C>, Upper<C>)>,
}

impl<C: Coord> GeneralizedBox<C> {
    pub fn new(intervals: Vec<(Lower<C>, Upper<C>)>) -> Self {
        let intervals = intervals
            .into_iter()
            .map(|(l, u)| (l.canonical(), u.canonical()))
            .collect();
        GeneralizedBox { intervals }
    }

    /// The whole space of the given rank.
    pub fn full(rank: usize) -> Self {
        GeneralizedBox { intervals: vec![(Lower::NegInf, Upper::PosInf); rank] }
    }

    pub fn rank(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_nonempty(&self) -> bool {
        self.intervals.iter().all(|(l, u)| interval_nonempty(l, u))
    }

    pub fn contains(&self, point: &[C]) -> bool {
        debug_assert_eq!(point.len(), self.rank());
        self.intervals
            .iter()
            .zip(point)
            .all(|((l, u), x)| l.admits(x) && u.admits(x))
    }

    fn intersect(&self, other: &Self) -> Option<Self> {
        let intervals: Vec<_> = self
            .intervals
            .iter()
            .zip(&other.intervals)
            .map(|((al, au), (bl, bu))| (lower_max(al, bl), upper_min(au, bu)))
            .collect();
        let b = GeneralizedBox { intervals };
        b.is_nonempty().then_some(b)
    }

    /// `self` minus `other`, as at most `2 * rank` pairwise-disjoint boxes.
    ///
    /// Splits coordinate by coordinate: the part of `self` below `other`'s
    /// lower bound in coordinate `i`, the part above its upper bound, then
    /// recurse into the overlap slab.
    fn difference(&self, other: &Self) -> Vec<Self> {
        if self.intersect(other).is_none() {
            return vec![self.clone()];
        }
        let mut pieces = Vec::new();
        let mut rest = self.clone();
        for i in 0..self.rank() {
            let (ol, ou) = &other.intervals[i];
            if let Some(cap) = complement_of_lower(ol) {
                let mut below = rest.clone();
                below.intervals[i].1 = upper_min(&below.intervals[i].1, &cap);
                if below.is_nonempty() {
                    pieces.push(below);
                }
            }
            if let Some(floor) = complement_of_upper(ou) {
                let mut above = rest.clone();
                above.intervals[i].0 = lower_max(&above.intervals[i].0, &floor);
                if above.is_nonempty() {
                    pieces.push(above);
                }
            }
            rest.intervals[i].0 = lower_max(&rest.intervals[i].0, ol);
            rest.intervals[i].1 = upper_min(&rest.intervals[i].1, ou);
        }
        pieces
    }

    fn cmp_key(&self, other: &Self) -> Ordering {
        for ((al, au), (bl, bu)) in self.intervals.iter().zip(&other.intervals) {
            match cmp_lower(al, bl).then_with(|| cmp_upper(au, bu)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// Finite union of generalized boxes in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region<C> {
    rank: usize,
    boxes: Vec<GeneralizedBox<C>>,
}

impl<C: Coord> Region<C> {
    pub fn empty(rank: usize) -> Self {
        Region { rank, boxes: Vec::new() }
    }

    pub fn full(rank: usize) -> Self {
        Region { rank, boxes: vec![GeneralizedBox::full(rank)] }
    }

    /// Build a region from an arbitrary list of boxes, normalizing to
    /// pairwise-disjoint pieces in a deterministic order.
    pub fn from_boxes(rank: usize, boxes: Vec<GeneralizedBox<C>>) -> Result<Self, RegionError> {
        for b in &boxes {
            if b.rank() != rank {
                return Err(RegionError::RankMismatch(rank, b.rank()));
            }
        }
        Ok(Self::normalize(rank, boxes))
    }

    fn normalize(rank: usize, mut boxes: Vec<GeneralizedBox<C>>) -> Self {
        boxes.retain(GeneralizedBox::is_nonempty);
        boxes.sort_by(|a, b| a.cmp_key(b));
        let mut disjoint: Vec<GeneralizedBox<C>> = Vec::new();
        for b in boxes {
            let mut pieces = vec![b];
            for d in &disjoint {
                pieces = pieces.into_iter().flat_map(|p| p.difference(d)).collect();
                if pieces.is_empty() {
                    break;
                }
            }
            disjoint.extend(pieces);
        }
        disjoint.sort_by(|a, b| a.cmp_key(b));
        Region { rank, boxes: disjoint }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn boxes(&self) -> &[GeneralizedBox<C>] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn member(&self, point: &[C]) -> Result<bool, RegionError> {
        if point.len() != self.rank {
            return Err(RegionError::RankMismatch(self.rank, point.len()));
        }
        Ok(self.boxes.iter().any(|b| b.contains(point)))
    }

    fn check_rank(&self, other: &Self) -> Result<(), RegionError> {
        if self.rank != other.rank {
            return Err(RegionError::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self, RegionError> {
        self.check_rank(other)?;
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        Ok(Self::normalize(self.rank, boxes))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, RegionError> {
        self.check_rank(other)?;
        let mut boxes = Vec::new();
        for a in &self.boxes {
            for b in &other.boxes {
                if let Some(c) = a.intersect(b) {
                    boxes.push(c);
                }
            }
        }
        Ok(Self::normalize(self.rank, boxes))
    }

    pub fn difference(&self, other: &Self) -> Result<Self, RegionError> {
        self.check_rank(other)?;
        let mut boxes = Vec::new();
        for a in &self.boxes {
            let mut pieces = vec![a.clone()];
            for b in &other.boxes {
                pieces = pieces.into_iter().flat_map(|p| p.difference(b)).collect();
                if pieces.is_empty() {
                    break;
                }
            }
            boxes.extend(pieces);
        }
        Ok(Self::normalize(self.rank, boxes))
    }

    pub fn equals(&self, other: &Self) -> Result<bool, RegionError> {
        Ok(self.difference(other)?.is_empty() && other.difference(self)?.is_empty())
    }

    pub fn subset_of(&self, other: &Self) -> Result<bool, RegionError> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Down-closure: `{q : q <= s for some s in the region}` under the
    /// componentwise order.  Distributes over the union, and for a single box
    /// replaces every lower bound by minus infinity.
    pub fn down_closure(&self) -> Self {
        let boxes = self
            .boxes
            .iter()
            .map(|b| GeneralizedBox {
                intervals: b
                    .intervals
                    .iter()
                    .map(|(_, u)| (Lower::NegInf, u.clone()))
                    .collect(),
            })
            .collect();
        Self::normalize(self.rank, boxes)
    }
}

/// Convenience constructor for integer boxes: `None` means unbounded.
pub fn int_box(lo: &[Option<i64>], hi: &[Option<i64>]) -> GeneralizedBox<i64> {
    assert_eq!(lo.len(), hi.len());
    GeneralizedBox::new(
        lo.iter()
            .zip(hi)
            .map(|(l, u)| {
                (
                    l.map_or(Lower::NegInf, Lower::Incl),
                    u.map_or(Upper::PosInf, Upper::Incl),
                )
            })
            .collect(),
    )
}
