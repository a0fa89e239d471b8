//! Coordinate types and one-dimensional interval endpoints shared by the
//! region algebra and the downset calculus.
//!
//! Integer coordinates are discrete: strict endpoints are eagerly rewritten
//! to inclusive ones, so normal forms never contain open endpoints.  Rational
//! coordinates are dense and keep open/closed flags.

use num_rational::BigRational;
use std::cmp::Ordering;

/// A coordinate field for boxes and apexes: `i64` for the discrete orthant
/// over the integers, `BigRational` for the dense rational orthant.
pub trait Coord: Clone + Ord + std::fmt::Debug + std::fmt::Display {
    /// Whether the coordinate line is discrete (so `x < a` iff `x <= pred(a)`).
    const DISCRETE: bool;
    fn zero() -> Self;
    /// Successor on a discrete line. Never called in dense mode.
    fn succ(&self) -> Self;
    /// Predecessor on a discrete line. Never called in dense mode.
    fn pred(&self) -> Self;
}

impl Coord for i64 {
    const DISCRETE: bool = true;
    fn zero() -> Self {
        0
    }
    fn succ(&self) -> Self {
        self + 1
    }
    fn pred(&self) -> Self {
        self - 1
    }
}

impl Coord for BigRational {
    const DISCRETE: bool = false;
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn succ(&self) -> Self {
        unreachable!("dense coordinates have no successor")
    }
    fn pred(&self) -> Self {
        unreachable!("dense coordinates have no predecessor")
    }
}

/// Lower endpoint of a one-dimensional interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lower<C> {
    NegInf,
    /// `x >= c`
    Incl(C),
    /// `x > c` (dense mode only after normalization)
    Excl(C),
}

/// Upper endpoint of a one-dimensional interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Upper<C> {
    /// `x <= c`
    Incl(C),
    /// `x < c` (dense mode only after normalization)
    Excl(C),
    PosInf,
}

impl<C: Coord> Lower<C> {
    /// Rewrite strict endpoints on a discrete line.
    pub fn canonical(self) -> Self {
        match self {
            Lower::Excl(c) if C::DISCRETE => Lower::Incl(c.succ()),
            other => other,
        }
    }

    pub fn admits(&self, x: &C) -> bool {
        match self {
            Lower::NegInf => true,
            Lower::Incl(c) => c <= x,
            Lower::Excl(c) => c < x,
        }
    }
}

impl<C: Coord> Upper<C> {
    pub fn canonical(self) -> Self {
        match self {
            Upper::Excl(c) if C::DISCRETE => Upper::Incl(c.pred()),
            other => other,
        }
    }

    pub fn admits(&self, x: &C) -> bool {
        match self {
            Upper::PosInf => true,
            Upper::Incl(c) => x <= c,
            Upper::Excl(c) => x < c,
        }
    }
}

/// Order on lower endpoints: smaller admits more points.
pub fn cmp_lower<C: Coord>(a: &Lower<C>, b: &Lower<C>) -> Ordering {
    use Lower::*;
    match (a, b) {
        (NegInf, NegInf) => Ordering::Equal,
        (NegInf, _) => Ordering::Less,
        (_, NegInf) => Ordering::Greater,
        (Incl(x), Incl(y)) | (Excl(x), Excl(y)) => x.cmp(y),
        (Incl(x), Excl(y)) => x.cmp(y).then(Ordering::Less),
        (Excl(x), Incl(y)) => x.cmp(y).then(Ordering::Greater),
    }
}

/// Order on upper endpoints: larger admits more points.
pub fn cmp_upper<C: Coord>(a: &Upper<C>, b: &Upper<C>) -> Ordering {
    use Upper::*;
    match (a, b) {
        (PosInf, PosInf) => Ordering::Equal,
        (PosInf, _) => Ordering::Greater,
        (_, PosInf) => Ordering::Less,
        (Incl(x), Incl(y)) | (Excl(x), Excl(y)) => x.cmp(y),
        (Incl(x), Excl(y)) => x.cmp(y).then(Ordering::Greater),
        (Excl(x), Incl(y)) => x.cmp(y).then(Ordering::Less),
    }
}

pub fn lower_max<C: Coord>(a: &Lower<C>, b: &Lower<C>) -> Lower<C> {
    if cmp_lower(a, b) == Ordering::Less { b.clone() } else { a.clone() }
}

pub fn upper_min<C: Coord>(a: &Upper<C>, b: &Upper<C>) -> Upper<C> {
    if cmp_upper(a, b) == Ordering::Greater { b.clone() } else { a.clone() }
}

/// Is the interval with these endpoints nonempty?
pub fn interval_nonempty<C: Coord>(lo: &Lower<C>, hi: &Upper<C>) -> bool {
    match (lo, hi) {
        (Lower::NegInf, _) | (_, Upper::PosInf) => true,
        (Lower::Incl(a), Upper::Incl(b)) => a <= b,
        (Lower::Incl(a), Upper::Excl(b))
        | (Lower::Excl(a), Upper::Incl(b))
        | (Lower::Excl(a), Upper::Excl(b)) => a < b,
    }
}

/// The upper endpoint of the complement of a lower endpoint, if the
/// complement piece `(-inf, ..)` is nonempty.
pub fn complement_of_lower<C: Coord>(lo: &Lower<C>) -> Option<Upper<C>> {
    match lo {
        Lower::NegInf => None,
        Lower::Incl(c) => Some(Upper::Excl(c.clone()).canonical()),
        Lower::Excl(c) => Some(Upper::Incl(c.clone())),
    }
}

/// The lower endpoint of the complement of an upper endpoint, if the
/// complement piece `(.., +inf)` is nonempty.
pub fn complement_of_upper<C: Coord>(hi: &Upper<C>) -> Option<Lower<C>> {
    match hi {
        Upper::PosInf => None,
        Upper::Incl(c) => Some(Lower::Excl(c.clone()).canonical()),
        Upper::Excl(c) => Some(Lower::Incl(c.clone())),
    }
}
