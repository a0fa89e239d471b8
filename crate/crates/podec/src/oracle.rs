//! Brute-force grid oracle for the downset calculus.
//!
//! Every operation here chases the set-theoretic definition pointwise on a
//! finite integer box, without using the coprincipal-piece formulas from
//! `downset`.  Localization sweeps all grid points above a query along the
//! face, supports literally subtract the localizations at non-contained
//! faces, and the primary component searches for a down-closure witness.
//!
//! The oracle answers are exact on the whole grid whenever the box upper
//! corner clears every apex coordinate by at least one: beyond the largest
//! apex, membership in a downset is constant along every coordinate line,
//! so one sample point past the apexes decides the unbounded sweep.

use crate::downset::{orthant_faces, DownsetExpr};
use crate::region::Region;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("grid box has empty extent in coordinate {0}")]
    EmptyBox(usize),
    #[error("grid box upper corner {hi:?} does not clear the apexes {apex_max:?} by the margin")]
    BoxTooSmall { hi: Vec<i64>, apex_max: Vec<i64> },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

/// An axis-aligned integer box `[lo, hi]`, both corners inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl GridBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self, OracleError> {
        assert_eq!(lo.len(), hi.len());
        for i in 0..lo.len() {
            if lo[i] > hi[i] {
                return Err(OracleError::EmptyBox(i));
            }
        }
        Ok(GridBox { lo, hi })
    }

    pub fn rank(&self) -> usize {
        self.lo.len()
    }

    pub fn len(&self) -> usize {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l + 1) as usize)
            .product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, q: &[i64]) -> bool {
        q.iter()
            .enumerate()
            .all(|(i, &x)| self.lo[i] <= x && x <= self.hi[i])
    }

    pub fn index(&self, q: &[i64]) -> Option<usize> {
        if !self.contains(q) {
            return None;
        }
        let mut idx = 0usize;
        for i in 0..self.rank() {
            let extent = (self.hi[i] - self.lo[i] + 1) as usize;
            idx = idx * extent + (q[i] - self.lo[i]) as usize;
        }
        Some(idx)
    }

    pub fn points(&self) -> GridIter {
        GridIter { grid: self.clone(), cur: Some(self.lo.clone()) }
    }
}

/// Odometer iteration over all points of a grid box.
pub struct GridIter {
    grid: GridBox,
    cur: Option<Vec<i64>>,
}

impl Iterator for GridIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.cur.clone()?;
        let cur = self.cur.as_mut().unwrap();
        for i in (0..self.grid.rank()).rev() {
            if cur[i] < self.grid.hi[i] {
                cur[i] += 1;
                return Some(out);
            }
            cur[i] = self.grid.lo[i];
        }
        self.cur = None;
        Some(out)
    }
}

/// A subset of a grid box stored as a membership table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSet {
    pub grid: GridBox,
    bits: Vec<bool>,
}

impl GridSet {
    pub fn empty(grid: GridBox) -> Self {
        let n = grid.len();
        GridSet { grid, bits: vec![false; n] }
    }

    pub fn from_fn(grid: GridBox, mut f: impl FnMut(&[i64]) -> bool) -> Self {
        let mut set = GridSet::empty(grid);
        for p in set.grid.clone().points() {
            let v = f(&p);
            set.set(&p, v);
        }
        set
    }

    pub fn member(&self, q: &[i64]) -> bool {
        self.grid.index(q).map(|i| self.bits[i]).unwrap_or(false)
    }

    pub fn set(&mut self, q: &[i64], value: bool) {
        let i = self.grid.index(q).expect("point inside grid");
        self.bits[i] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn difference(&self, other: &GridSet) -> GridSet {
        assert_eq!(self.grid, other.grid);
        GridSet {
            grid: self.grid.clone(),
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a && !b)
                .collect(),
        }
    }

    pub fn union(&self, other: &GridSet) -> GridSet {
        assert_eq!(self.grid, other.grid);
        GridSet {
            grid: self.grid.clone(),
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| a || b).collect(),
        }
    }

    /// First grid point (odometer order) where the two sets disagree.
    pub fn first_mismatch(&self, other: &GridSet) -> Option<Vec<i64>> {
        assert_eq!(self.grid, other.grid);
        self.grid
            .points()
            .find(|p| self.member(p) != other.member(p))
    }
}

/// Tabulate a symbolic downset on a grid.
pub fn from_downset(d: &DownsetExpr<i64>, grid: &GridBox) -> GridSet {
    GridSet::from_fn(grid.clone(), |p| d.member(p).expect("rank checked"))
}

/// Tabulate a region on a grid.
pub fn from_region(r: &Region<i64>, grid: &GridBox) -> GridSet {
    GridSet::from_fn(grid.clone(), |p| r.member(p).expect("rank checked"))
}

/// A grid box whose upper corner clears every apex coordinate of `d` by
/// `margin`, extended from a caller-chosen lower corner.
pub fn margin_box(d: &DownsetExpr<i64>, lo: Vec<i64>, margin: i64) -> GridBox {
    let n = d.rank();
    let mut hi = lo.clone();
    for p in d.pieces() {
        for i in 0..n {
            if !p.face.contains(&i) {
                hi[i] = hi[i].max(p.apex[i]);
            }
        }
    }
    for h in &mut hi {
        *h += margin;
    }
    GridBox::new(lo, hi).expect("margin box is nonempty")
}

fn check_margin(d: &DownsetExpr<i64>, grid: &GridBox, margin: i64) -> Result<(), OracleError> {
    let n = d.rank();
    let mut apex_max = vec![i64::MIN; n];
    for p in d.pieces() {
        for i in 0..n {
            if !p.face.contains(&i) {
                apex_max[i] = apex_max[i].max(p.apex[i]);
            }
        }
    }
    for i in 0..n {
        if apex_max[i] != i64::MIN && grid.hi[i] < apex_max[i] + margin {
            return Err(OracleError::BoxTooSmall {
                hi: grid.hi.clone(),
                apex_max,
            });
        }
    }
    Ok(())
}

fn strides(grid: &GridBox) -> Vec<usize> {
    let n = grid.rank();
    let mut s = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        s[i] = s[i + 1] * (grid.hi[i + 1] - grid.lo[i + 1] + 1) as usize;
    }
    s
}

/// Points of `set` all of whose grid translates along `tau` stay in `set`.
///
/// This is the literal localization condition `q + tau inside D`, truncated
/// to the grid; it is exact when the grid clears the apexes.  The unbounded
/// sweep is computed by the equivalent one-step recurrence, descending from
/// the top corner: `q` qualifies iff `q` is in the set and each unit step
/// along `tau` lands on a qualifying point (or leaves the grid).
pub fn grid_localize(set: &GridSet, tau: &BTreeSet<usize>) -> GridSet {
    let grid = set.grid.clone();
    let stride = strides(&grid);
    let points: Vec<Vec<i64>> = grid.points().collect();
    let mut bits = set.bits.clone();
    for idx in (0..points.len()).rev() {
        if !bits[idx] {
            continue;
        }
        let q = &points[idx];
        let ok = tau
            .iter()
            .all(|&i| q[i] == grid.hi[i] || bits[idx + stride[i]]);
        bits[idx] = ok;
    }
    GridSet { grid, bits }
}

/// Points of `D` lying in no localization at a face not inside `tau`.
pub fn grid_global_support(set: &GridSet, n: usize, tau: &BTreeSet<usize>) -> GridSet {
    let mut out = set.clone();
    for other in orthant_faces(n) {
        if !other.is_subset(tau) {
            out = out.difference(&grid_localize(set, &other));
        }
    }
    out
}

/// Global `tau`-support of the `tau`-localization.
pub fn grid_local_support(set: &GridSet, n: usize, tau: &BTreeSet<usize>) -> GridSet {
    grid_global_support(&grid_localize(set, tau), n, tau)
}

/// Down-closure of the local support inside the grid: a point belongs iff
/// some coordinatewise-larger grid point is in the local support.  Computed
/// by the descending one-step recurrence equivalent to the witness search.
pub fn grid_primary_component(set: &GridSet, n: usize, tau: &BTreeSet<usize>) -> GridSet {
    let support = grid_local_support(set, n, tau);
    let grid = set.grid.clone();
    let stride = strides(&grid);
    let points: Vec<Vec<i64>> = grid.points().collect();
    let mut bits = support.bits;
    for idx in (0..points.len()).rev() {
        if bits[idx] {
            continue;
        }
        let q = &points[idx];
        bits[idx] =
            (0..grid.rank()).any(|i| q[i] < grid.hi[i] && bits[idx + stride[i]]);
    }
    GridSet { grid, bits }
}

/// One grid component for every face with nonempty local support.
pub fn grid_canonical_decomposition(
    set: &GridSet,
    n: usize,
) -> Vec<(BTreeSet<usize>, GridSet)> {
    orthant_faces(n)
        .into_iter()
        .filter_map(|tau| {
            if grid_local_support(set, n, &tau).is_empty() {
                None
            } else {
                let comp = grid_primary_component(set, n, &tau);
                Some((tau, comp))
            }
        })
        .collect()
}

/// Tabulate `d` on `grid` after checking the margin rule, so the truncated
/// sweeps above are provably exact.
pub fn checked_tabulation(
    d: &DownsetExpr<i64>,
    grid: &GridBox,
    margin: i64,
) -> Result<GridSet, OracleError> {
    check_margin(d, grid, margin)?;
    Ok(from_downset(d, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::downset::{fixture_e1, fixture_e2, int_downset, piece};

    fn chi(ids: &[usize]) -> BTreeSet<usize> {
        ids.iter().cloned().collect()
    }

    fn grid2() -> GridBox {
        GridBox::new(vec![-3, -3], vec![3, 3]).unwrap()
    }

    #[test]
    fn grid_box_iteration_and_index() {
        let g = GridBox::new(vec![0, 0], vec![1, 2]).unwrap();
        let pts: Vec<Vec<i64>> = g.points().collect();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![0, 0]);
        assert_eq!(pts[5], vec![1, 2]);
        for (k, p) in pts.iter().enumerate() {
            assert_eq!(g.index(p), Some(k));
        }
        assert_eq!(g.index(&[2, 0]), None);
    }

    #[test]
    fn localize_matches_hand_table() {
        // D = {x <= 0} u {x <= 1, y <= 0}; D_y = {x <= 0}, D_x empty.
        let set = from_downset(&fixture_e1(), &grid2());
        let along_y = grid_localize(&set, &chi(&[1]));
        for p in grid2().points() {
            assert_eq!(along_y.member(&p), p[0] <= 0, "{p:?}");
        }
        assert!(grid_localize(&set, &chi(&[0])).is_empty());
        // Localizing at the trivial face is the identity.
        assert_eq!(grid_localize(&set, &chi(&[])), set);
    }

    #[test]
    fn global_support_matches_hand_table() {
        // Trivial-face global support of E1 is the strip x = 1, y <= 0.
        let set = from_downset(&fixture_e1(), &grid2());
        let g = grid_global_support(&set, 2, &chi(&[]));
        for p in grid2().points() {
            assert_eq!(g.member(&p), p[0] == 1 && p[1] <= 0, "{p:?}");
        }
    }

    #[test]
    fn local_support_matches_hand_table() {
        // E2 local support at the trivial face is the box [1,2] x [1,2].
        let set = from_downset(&fixture_e2(), &grid2());
        let l = grid_local_support(&set, 2, &chi(&[]));
        for p in grid2().points() {
            let expected = (1..=2).contains(&p[0]) && (1..=2).contains(&p[1]);
            assert_eq!(l.member(&p), expected, "{p:?}");
        }
    }

    #[test]
    fn primary_components_cover_e2() {
        let set = from_downset(&fixture_e2(), &grid2());
        let comps = grid_canonical_decomposition(&set, 2);
        assert_eq!(comps.len(), 3);
        let mut union = GridSet::empty(grid2());
        for (_, c) in &comps {
            union = union.union(c);
        }
        assert_eq!(union.first_mismatch(&set), None);
    }

    /// The raw definition: sweep the whole translate box above the query.
    fn naive_localize(set: &GridSet, tau: &BTreeSet<usize>) -> GridSet {
        GridSet::from_fn(set.grid.clone(), |q| {
            let hi: Vec<i64> = (0..set.grid.rank())
                .map(|i| if tau.contains(&i) { set.grid.hi[i] } else { q[i] })
                .collect();
            GridBox::new(q.to_vec(), hi)
                .unwrap()
                .points()
                .all(|p| set.member(&p))
        })
    }

    fn naive_down_closure(support: &GridSet) -> GridSet {
        GridSet::from_fn(support.grid.clone(), |q| {
            GridBox::new(q.to_vec(), support.grid.hi.clone())
                .unwrap()
                .points()
                .any(|s| support.member(&s))
        })
    }

    #[test]
    fn recurrences_match_naive_sweeps() {
        for d in [fixture_e1(), fixture_e2()] {
            let set = from_downset(&d, &grid2());
            for mask in 0u32..4 {
                let tau: BTreeSet<usize> =
                    (0..2).filter(|i| mask & (1 << i) != 0).collect();
                assert_eq!(
                    grid_localize(&set, &tau).first_mismatch(&naive_localize(&set, &tau)),
                    None,
                    "localize at {tau:?}"
                );
                let support = grid_local_support(&set, 2, &tau);
                assert_eq!(
                    grid_primary_component(&set, 2, &tau)
                        .first_mismatch(&naive_down_closure(&support)),
                    None,
                    "component at {tau:?}"
                );
            }
        }
    }

    #[test]
    fn margin_rule() {
        let d = int_downset(2, vec![piece(&[2, 2], &[])]);
        let small = GridBox::new(vec![-1, -1], vec![2, 2]).unwrap();
        assert!(matches!(
            checked_tabulation(&d, &small, 1),
            Err(OracleError::BoxTooSmall { .. })
        ));
        let ok = margin_box(&d, vec![-1, -1], 1);
        assert_eq!(ok.hi, vec![3, 3]);
        assert!(checked_tabulation(&d, &ok, 1).is_ok());
    }
}
