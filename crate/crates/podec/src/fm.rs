//! Fourier-Motzkin elimination over exact integer arithmetic.
//!
//! Rows represent affine inequalities `c . x + c0 >= 0` with `BigInt`
//! coefficients; the constant term is the last entry.  Elimination is used
//! for cone dual-description conversion and for rational feasibility of
//! small linear systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_bigint::Sign;
use num_traits::Zero;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FmError {
    #[error("Fourier-Motzkin row budget exceeded ({0} rows)")]
    ConversionOverflow(usize),
}

pub const DEFAULT_ROW_BUDGET: usize = 20_000;

pub type Row = Vec<BigInt>;

fn primitive(mut row: Row) -> Row {
    let mut g = BigInt::zero();
    for c in &row {
        g = g.gcd(c);
    }
    if !g.is_zero() {
        for c in &mut row {
            *c = &*c / &g;
        }
    }
    row
}

fn is_trivial(row: &Row) -> bool {
    // All variable coefficients zero and constant >= 0: always true.
    let n = row.len() - 1;
    row[..n].iter().all(Zero::is_zero) && row[n].sign() != Sign::Minus
}

/// Eliminate variable `var` from the system, keeping all other columns.
fn eliminate_var(rows: &[Row], var: usize, budget: usize) -> Result<Vec<Row>, FmError> {
    let mut zeros: BTreeSet<Row> = BTreeSet::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for r in rows {
        match r[var].sign() {
            Sign::NoSign => {
                zeros.insert(r.clone());
            }
            Sign::Plus => pos.push(r.clone()),
            Sign::Minus => neg.push(r.clone()),
        }
    }
    for p in &pos {
        for q in &neg {
            // p[var] * q - q[var] * p has zero coefficient on var and the
            // right orientation since p[var] > 0 > q[var].
            let a = &p[var];
            let b = &q[var];
            let combo: Row = p
                .iter()
                .zip(q)
                .map(|(pc, qc)| a * qc - b * pc)
                .collect();
            let combo = primitive(combo);
            if !is_trivial(&combo) {
                zeros.insert(combo);
            }
            if zeros.len() > budget {
                return Err(FmError::ConversionOverflow(zeros.len()));
            }
        }
    }
    Ok(zeros.into_iter().collect())
}

/// Eliminate the variables in `vars` (processed back to front) and return the
/// projected system on the remaining columns.
pub fn eliminate(rows: Vec<Row>, vars: &[usize], budget: usize) -> Result<Vec<Row>, FmError> {
    let mut rows: Vec<Row> = rows
        .into_iter()
        .map(primitive)
        .filter(|r| !is_trivial(r))
        .collect();
    let mut sorted: Vec<usize> = vars.to_vec();
    sorted.sort_unstable();
    for &v in sorted.iter().rev() {
        rows = eliminate_var(&rows, v, budget)?;
    }
    Ok(rows)
}

/// Is the system `{row . (x, 1) >= 0}` satisfiable over the rationals?
///
/// Eliminates every variable; the projection is feasible iff no resulting
/// constant row is negative, and by the Fourier-Motzkin correctness theorem
/// feasibility lifts back to the full system.
pub fn feasible(rows: Vec<Row>, nvars: usize, budget: usize) -> Result<bool, FmError> {
    let vars: Vec<usize> = (0..nvars).collect();
    let projected = eliminate(rows, &vars, budget)?;
    for r in projected {
        debug_assert!(r[..nvars].iter().all(Zero::is_zero));
        if r[nvars] < BigInt::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Build the pair of rows encoding the equality `c . x + c0 = 0`.
pub fn equality(coeffs: &[BigInt], constant: BigInt) -> [Row; 2] {
    let mut pos: Row = coeffs.to_vec();
    pos.push(constant);
    let neg: Row = pos.iter().map(|c| -c).collect();
    [pos, neg]
}

pub fn bigs(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
