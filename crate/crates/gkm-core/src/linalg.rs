//! Exact linear algebra over Q.
//!
//! Ranks and solution spaces of the cohomology constraint systems are
//! computed by reduced row echelon form over `BigRational`. A parallel
//! integral route (clearing denominators and passing to the Hermite form
//! over Z) lives in [`crate::lattice`]; the two are cross-checked rather
//! than merged.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::lattice::IntegerMatrix;

/// Dense matrix over Q, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigRational>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![vec![BigRational::zero(); cols]; rows],
        }
    }

    pub fn from_rows(data: Vec<Vec<BigRational>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        assert!(data.iter().all(|r| r.len() == cols), "ragged rows");
        RationalMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i]
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| !self.data[i][col].is_zero()) else {
                continue;
            };
            self.data.swap(row, p);
            let inv = self.data[row][col].clone();
            for j in col..self.cols {
                let t = &self.data[row][j] / &inv;
                self.data[row][j] = t;
            }
            for i in 0..self.rows {
                if i == row || self.data[i][col].is_zero() {
                    continue;
                }
                let f = self.data[i][col].clone();
                for j in col..self.cols {
                    let t = &self.data[row][j] * &f;
                    self.data[i][j] -= t;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Canonical basis of { x : M x = 0 }: one vector per free column, with
    /// a 1 in the free position.
    pub fn nullspace_basis(&self) -> Vec<Vec<BigRational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let is_pivot = {
            let mut mask = vec![false; self.cols];
            for &p in &pivots {
                mask[p] = true;
            }
            mask
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut x = vec![BigRational::zero(); self.cols];
            x[free] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -m.data[i][free].clone();
            }
            basis.push(x);
        }
        basis
    }
}

/// Express `target` as a linear combination of the given column vectors,
/// setting coefficients of redundant columns to zero. Returns `None` when
/// the target lies outside the span.
pub fn solve_in_column_span(
    cols: &[Vec<BigRational>],
    target: &[BigRational],
) -> Option<Vec<BigRational>> {
    let dim = target.len();
    assert!(cols.iter().all(|c| c.len() == dim), "dimension mismatch");
    let k = cols.len();
    let mut m = RationalMatrix::zeros(dim, k + 1);
    for (j, c) in cols.iter().enumerate() {
        for i in 0..dim {
            m.set(i, j, c[i].clone());
        }
    }
    for i in 0..dim {
        m.set(i, k, target[i].clone());
    }
    let pivots = m.rref();
    if pivots.contains(&k) {
        return None; // inconsistent
    }
    let mut x = vec![BigRational::zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = m.get(i, k).clone();
    }
    Some(x)
}

/// Scale each row by the lcm of its denominators, yielding an integer
/// matrix with the same row space and kernel.
pub fn integer_matrix_from_rational_rows(rows: &[Vec<BigRational>]) -> IntegerMatrix {
    let cols = rows.first().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        assert_eq!(row.len(), cols, "ragged rows");
        let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        out.push(row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect());
    }
    IntegerMatrix::from_rows(out)
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
