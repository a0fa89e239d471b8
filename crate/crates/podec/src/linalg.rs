//! Dense exact rational linear algebra: just enough to compute kernels,
//! column spaces, solves and subspace intersections for small per-degree
//! vector spaces.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Row-major dense matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(len: usize, cols: Vec<Vec<Rat>>) -> Self {
        let mut m = Mat::zeros(len, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), len);
            for i in 0..len {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// Stack vertically: [self; other].
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Stack horizontally: [self | other].
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(r * self.cols + j, p * self.cols + j);
                }
            }
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = &self[(i, j)] - &f * &self[(r, j)];
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the null space, as columns.
    pub fn kernel_basis(&self) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut cols = Vec::new();
        for &f in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[(r, f)].clone();
            }
            cols.push(v);
        }
        Mat::from_cols(self.cols, cols)
    }

    /// Basis of the column space: the pivot columns of the original matrix,
    /// in their original order.
    pub fn column_space_basis(&self) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref();
        Mat::from_cols(self.rows, pivots.iter().map(|&c| self.col(c)).collect())
    }

    /// Solve `self * X = rhs` exactly; `None` if inconsistent.
    pub fn solve(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows);
        let mut aug = self.hstack(rhs);
        let pivots = aug.rref();
        // Inconsistent if any pivot falls in the rhs block.
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.cols, rhs.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(p, j)] = aug[(r, self.cols + j)].clone();
            }
        }
        Some(x)
    }
}

/// Does the column span of `space` contain `v`?
pub fn span_contains(space: &Mat, v: &[Rat]) -> bool {
    let rhs = Mat::from_cols(v.len(), vec![v.to_vec()]);
    space.solve(&rhs).is_some()
}

/// Is the column span of `a` contained in the column span of `b`?
pub fn span_subset(a: &Mat, b: &Mat) -> bool {
    b.solve(a).is_some()
}

pub fn span_eq(a: &Mat, b: &Mat) -> bool {
    span_subset(a, b) && span_subset(b, a)
}

/// Intersection of the column spans of `a` and `b`, as a column basis.
pub fn span_intersect(a: &Mat, b: &Mat) -> Mat {
    if a.cols() == 0 || b.cols() == 0 {
        return Mat::zeros(a.rows(), 0);
    }
    let neg_b = {
        let mut m = b.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = -m[(i, j)].clone();
                m[(i, j)] = v;
            }
        }
        m
    };
    let ker = a.hstack(&neg_b).kernel_basis();
    // Each kernel column splits as (x, y) with a*x = b*y; collect a*x.
    let mut cols = Vec::new();
    for j in 0..ker.cols() {
        let x: Vec<Rat> = (0..a.cols()).map(|i| ker[(i, j)].clone()).collect();
        cols.push(Mat::from_cols(a.cols(), vec![x]));
    }
    let mut vecs = Vec::new();
    for x in cols {
        vecs.push(a.mul(&x).col(0));
    }
    Mat::from_cols(a.rows(), vecs).column_space_basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_rank() {
        let m = Mat::from_rows(vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), rat(1)],
        ]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_is_kernel() {
        let m = Mat::from_rows(vec![vec![rat(1), rat(2), rat(3)], vec![rat(0), rat(1), rat(1)]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = Mat::from_rows(vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)], vec![rat(1), rat(1)]]);
        let b = Mat::from_cols(3, vec![vec![rat(2), rat(3), rat(5)]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x), b);
        let bad = Mat::from_cols(3, vec![vec![rat(2), rat(3), rat(6)]]);
        assert!(a.solve(&bad).is_none());
    }

    #[test]
    fn intersect_planes() {
        // span{e1,e2} ∩ span{e2,e3} = span{e2} in Q^3.
        let a = Mat::from_cols(3, vec![vec![rat(1), rat(0), rat(0)], vec![rat(0), rat(1), rat(0)]]);
        let b = Mat::from_cols(3, vec![vec![rat(0), rat(1), rat(0)], vec![rat(0), rat(0), rat(1)]]);
        let i = span_intersect(&a, &b);
        assert_eq!(i.cols(), 1);
        assert!(span_contains(&i, &[rat(0), rat(1), rat(0)]));
    }
}
