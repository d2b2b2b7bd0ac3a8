//! Integer lattice arithmetic.
//!
//! Weights live in the character lattice of a compact torus T = (S^1)^n,
//! identified with Z^n once a basis of Hom(T, S^1) is fixed. Everything in
//! this module is exact: coordinates are arbitrary-precision integers and
//! no floating point is ever involved.
//!
//! The congruence `u = v (mod w)` means u - v = k*w for an integer k; it is
//! the condition for two characters to agree on the subtorus ker(w). A set
//! of weights generates the full lattice Z^n exactly when the matrix having
//! them as columns has Smith normal form with n unit invariant factors.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::ser::{Error as SerError, SerializeSeq};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("congruence modulus must be nonzero")]
    ZeroModulus,
}

/// An element of Z^n. Ordering is lexicographic on coordinates, which gives
/// deterministic edge and multiset orderings everywhere downstream.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Vec<BigInt>);

impl Weight {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Weight(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![BigInt::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coord(&self, i: usize) -> &BigInt {
        &self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        Weight(self.0.iter().map(|c| c * k).collect())
    }

    fn check_rank(&self, other: &Weight) -> Result<(), LatticeError> {
        if self.rank() != other.rank() {
            return Err(LatticeError::RankMismatch {
                expected: self.rank(),
                found: other.rank(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }
}

// Weights serialize as plain JSON integer arrays, e.g. [1, -2]. Coordinates
// beyond i64/f64 range must survive a round trip, hence the arbitrary
// precision `Number` detour instead of native integer serialization.
impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            let n = serde_json::Number::from_str(&c.to_string()).map_err(S::Error::custom)?;
            seq.serialize_element(&n)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let nums = Vec::<serde_json::Number>::deserialize(de)?;
        let mut coords = Vec::with_capacity(nums.len());
        for n in nums {
            let c = BigInt::from_str(&n.to_string()).map_err(|_| {
                D::Error::custom(format!("weight coordinate `{n}` is not an integer"))
            })?;
            coords.push(c);
        }
        Ok(Weight(coords))
    }
}

/// Decide whether u = v (mod w), i.e. u - v = k*w for an integer k, and
/// return that k. The modulus must be nonzero; all three weights must share
/// a rank. Returns `None` when the difference is not an integer multiple.
pub fn congruent(u: &Weight, v: &Weight, w: &Weight) -> Result<Option<BigInt>, LatticeError> {
    u.check_rank(v)?;
    u.check_rank(w)?;
    if w.is_zero() {
        return Err(LatticeError::ZeroModulus);
    }
    let d = u - v;
    // k is pinned by the first nonzero coordinate of w; verify the rest.
    let i = w.0.iter().position(|c| !c.is_zero()).expect("w nonzero");
    if !(&d.0[i] % &w.0[i]).is_zero() {
        return Ok(None);
    }
    let k = &d.0[i] / &w.0[i];
    if d == w.scaled(&k) {
        Ok(Some(k))
    } else {
        Ok(None)
    }
}

fn parallel(u: &Weight, v: &Weight) -> bool {
    let n = u.rank();
    for i in 0..n {
        for j in (i + 1)..n {
            if &u.0[i] * &v.0[j] != &u.0[j] * &v.0[i] {
                return false;
            }
        }
    }
    true
}

/// True when every pair of weights is linearly independent over Q. The zero
/// weight counts as parallel to everything, so any collection containing it
/// (alongside at least one other weight) fails.
pub fn pairwise_independent(weights: &[Weight]) -> Result<bool, LatticeError> {
    for pair in weights.windows(2) {
        pair[0].check_rank(&pair[1])?;
    }
    for i in 0..weights.len() {
        for j in (i + 1)..weights.len() {
            if parallel(&weights[i], &weights[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True when the weights span Z^n over Z, i.e. the matrix with the weights
/// as columns has Smith normal form diag(1, ..., 1). An empty collection
/// generates nothing and yields `false`.
pub fn generates_lattice(weights: &[Weight]) -> Result<bool, LatticeError> {
    let Some(first) = weights.first() else {
        return Ok(false);
    };
    for w in weights {
        first.check_rank(w)?;
    }
    let n = first.rank();
    if weights.len() < n {
        return Ok(false);
    }
    let m = IntegerMatrix::from_cols(weights);
    let snf = smith_normal_form(&m);
    Ok((0..n).all(|t| snf.s.get(t, t).is_one()))
}

/// Dense matrix over Z, row major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(data: Vec<Vec<BigInt>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        assert!(data.iter().all(|r| r.len() == cols), "ragged rows");
        IntegerMatrix { rows, cols, data }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        IntegerMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&c| BigInt::from(c)).collect())
                .collect(),
        )
    }

    /// Matrix whose j-th column is weights[j].
    pub fn from_cols(weights: &[Weight]) -> Self {
        let rows = weights.first().map_or(0, Weight::rank);
        let cols = weights.len();
        let mut m = IntegerMatrix::zeros(rows, cols);
        for (j, w) in weights.iter().enumerate() {
            for i in 0..rows {
                m.data[i][j] = w.0[i].clone();
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += &self.data[i][k] * &other.data[k][j];
                }
                out.data[i][j] = acc;
            }
        }
        out
    }

    /// Matrix-vector product; the weight is a column vector.
    pub fn apply(&self, w: &Weight) -> Weight {
        assert_eq!(self.cols, w.rank(), "dimension mismatch");
        Weight(
            (0..self.rows)
                .map(|i| {
                    (0..self.cols)
                        .map(|j| &self.data[i][j] * &w.0[j])
                        .sum::<BigInt>()
                })
                .collect(),
        )
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut out = IntegerMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.data {
            row.swap(a, b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_scaled_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let t = &self.data[src][j] * k;
            self.data[dst][j] += t;
        }
    }

    /// col[dst] += k * col[src]
    fn add_scaled_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let t = &self.data[i][src] * k;
            self.data[i][dst] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i][j];
            self.data[i][j] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i][j];
            self.data[i][j] = v;
        }
    }

    /// Fraction-free Gaussian elimination; every intermediate division is
    /// exact, so the computation stays in Z.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut negated = false;
        let mut prev = BigInt::one();
        for k in 0..(n - 1) {
            if a[k][k].is_zero() {
                let Some(i) = ((k + 1)..n).find(|&i| !a[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, i);
                negated = !negated;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if negated {
            -d
        } else {
            d
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
            })
    }
}

/// U * m * V = S with U, V unimodular and S diagonal with each diagonal
/// entry dividing the next.
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub s: IntegerMatrix,
    pub v: IntegerMatrix,
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntegerMatrix::identity(r);
    let mut v = IntegerMatrix::identity(c);
    for t in 0..r.min(c) {
        'place: loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if s.get(i, j).is_zero() {
                        continue;
                    }
                    if pivot.map_or(true, |(pi, pj)| s.get(i, j).abs() < s.get(pi, pj).abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break 'place;
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);
            // Clear row and column t by truncated division; leftovers force
            // another round with a strictly smaller pivot.
            let mut dirty = false;
            for i in (0..r).filter(|&i| i != t) {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = s.get(i, t) / s.get(t, t);
                if !q.is_zero() {
                    s.add_scaled_row(i, t, &-q.clone());
                    u.add_scaled_row(i, t, &-q);
                }
                if !s.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in (0..c).filter(|&j| j != t) {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = s.get(t, j) / s.get(t, t);
                if !q.is_zero() {
                    s.add_scaled_col(j, t, &-q.clone());
                    v.add_scaled_col(j, t, &-q);
                }
                if !s.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'place;
            }
            // Invariant factor condition: s[t][t] must divide the block.
            let mut offender = None;
            'scan: for i in (t + 1)..r {
                for j in (t + 1)..c {
                    if !(s.get(i, j) % s.get(t, t)).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    s.add_scaled_row(t, i, &BigInt::one());
                    u.add_scaled_row(t, i, &BigInt::one());
                }
                None => break 'place,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, s, v }
}

/// Column-style Hermite reduction: returns (H, V) with m * V = H, V
/// unimodular, and H in column echelon form. The columns of V sitting over
/// zero columns of H form a basis of the integer kernel of m.
pub fn column_hermite_form(m: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let (r, c) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut v = IntegerMatrix::identity(c);
    let mut active = 0usize;
    for row in 0..r {
        if active == c {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in active..c {
                if h.get(row, j).is_zero() {
                    continue;
                }
                if best.map_or(true, |b| h.get(row, j).abs() < h.get(row, b).abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else {
                break; // row already clear on the active columns
            };
            h.swap_cols(active, b);
            v.swap_cols(active, b);
            let mut leftovers = false;
            for j in (active + 1)..c {
                if h.get(row, j).is_zero() {
                    continue;
                }
                let q = h.get(row, j) / h.get(row, active);
                if !q.is_zero() {
                    h.add_scaled_col(j, active, &-q.clone());
                    v.add_scaled_col(j, active, &-q);
                }
                if !h.get(row, j).is_zero() {
                    leftovers = true;
                }
            }
            if !leftovers {
                if h.get(row, active).is_negative() {
                    h.negate_col(active);
                    v.negate_col(active);
                }
                active += 1;
                break;
            }
        }
    }
    (h, v)
}

/// Basis of { x in Z^c : m x = 0 }, as column vectors.
pub fn integer_kernel_basis(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let (h, v) = column_hermite_form(m);
    let mut basis = Vec::new();
    for j in 0..h.cols() {
        if (0..h.rows()).all(|i| h.get(i, j).is_zero()) {
            basis.push((0..v.rows()).map(|i| v.get(i, j).clone()).collect());
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(coords: &[i64]) -> Weight {
        Weight::from_ints(coords)
    }

    #[test]
    fn congruent_unit_multiple() {
        let k = congruent(&w(&[1, 0]), &w(&[0, 1]), &w(&[1, -1])).unwrap();
        assert_eq!(k, Some(BigInt::from(1)));
    }

    #[test]
    fn congruent_absent() {
        let k = congruent(&w(&[0, 1]), &w(&[0, -1]), &w(&[1, 1])).unwrap();
        assert_eq!(k, None);
    }

    #[test]
    fn congruent_reverse_orientation() {
        let k = congruent(&w(&[0, 1]), &w(&[-1, 0]), &w(&[1, 1])).unwrap();
        assert_eq!(k, Some(BigInt::from(1)));
    }

    #[test]
    fn congruent_zero_difference() {
        let k = congruent(&w(&[3, 5]), &w(&[3, 5]), &w(&[2, 7])).unwrap();
        assert_eq!(k, Some(BigInt::from(0)));
    }

    #[test]
    fn congruent_rank_mismatch() {
        let err = congruent(&w(&[1, 0]), &w(&[0, 1, 0]), &w(&[1, 1])).unwrap_err();
        assert!(matches!(err, LatticeError::RankMismatch { .. }));
    }

    #[test]
    fn congruent_zero_modulus() {
        let err = congruent(&w(&[1, 0]), &w(&[0, 1]), &w(&[0, 0])).unwrap_err();
        assert_eq!(err, LatticeError::ZeroModulus);
    }

    #[test]
    fn pairwise_independent_examples() {
        assert!(pairwise_independent(&[w(&[1, 0]), w(&[0, 1]), w(&[-1, -1])]).unwrap());
        assert!(!pairwise_independent(&[w(&[1, 0]), w(&[2, 0])]).unwrap());
        assert!(!pairwise_independent(&[w(&[2, 1]), w(&[4, 2]), w(&[0, 1])]).unwrap());
    }

    #[test]
    fn pairwise_independent_zero_weight() {
        assert!(!pairwise_independent(&[w(&[0, 0]), w(&[1, 0])]).unwrap());
    }

    #[test]
    fn generates_lattice_examples() {
        assert!(generates_lattice(&[w(&[1, 0]), w(&[0, 1]), w(&[1, 1])]).unwrap());
        assert!(!generates_lattice(&[w(&[1, 1]), w(&[1, -1]), w(&[-2, 0])]).unwrap());
        assert!(generates_lattice(&[w(&[2, 1]), w(&[1, 1])]).unwrap());
        assert!(!generates_lattice(&[w(&[1, 0])]).unwrap());
        assert!(!generates_lattice(&[]).unwrap());
    }

    #[test]
    fn snf_divisibility_fix() {
        let m = IntegerMatrix::from_int_rows(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.s, IntegerMatrix::from_int_rows(&[&[1, 0], &[0, 6]]));
        assert!(snf.u.is_unimodular());
        assert!(snf.v.is_unimodular());
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.s);
    }

    #[test]
    fn snf_rectangular() {
        let m = IntegerMatrix::from_int_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.s);
        assert!(snf.u.is_unimodular());
        assert!(snf.v.is_unimodular());
        // Invariant factors divide in order and are nonnegative.
        let mut prev = BigInt::one();
        for t in 0..3 {
            let d = snf.s.get(t, t).clone();
            assert!(!d.is_negative());
            if !d.is_zero() {
                assert!((&d % &prev).is_zero());
                prev = d;
            }
        }
        // Off-diagonal entries vanish.
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(snf.s.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn hermite_kernel() {
        // Rank-2 map Z^4 -> Z^2 with a 2-dimensional kernel.
        let m = IntegerMatrix::from_int_rows(&[&[1, 2, 3, 4], &[0, 2, 4, 6]]);
        let (h, v) = column_hermite_form(&m);
        assert!(v.is_unimodular());
        assert_eq!(m.mul(&v), h);
        let kernel = integer_kernel_basis(&m);
        assert_eq!(kernel.len(), 2);
        for vec in &kernel {
            for i in 0..m.rows() {
                let dot: BigInt = (0..m.cols()).map(|j| m.get(i, j) * &vec[j]).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn det_examples() {
        let m = IntegerMatrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.det(), BigInt::from(-2));
        let m = IntegerMatrix::from_int_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(m.det(), BigInt::from(-1));
        assert!(m.is_unimodular());
        let m = IntegerMatrix::from_int_rows(&[&[2, 0], &[0, 2]]);
        assert!(!m.is_unimodular());
        let singular = IntegerMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det(), BigInt::zero());
    }

    #[test]
    fn weight_serde_plain_integer_arrays() {
        let w = Weight::from_ints(&[1, 0, -7]);
        assert_eq!(serde_json::to_string(&w).unwrap(), "[1,0,-7]");
        let back: Weight = serde_json::from_str("[1,0,-7]").unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn weight_serde_big_coordinates() {
        let big = BigInt::from_str("123456789012345678901234567890").unwrap();
        let w = Weight::new(vec![big.clone(), -big.clone()]);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(
            json,
            "[123456789012345678901234567890,-123456789012345678901234567890]"
        );
        let back: Weight = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn weight_serde_rejects_non_integer() {
        assert!(serde_json::from_str::<Weight>("[1.5]").is_err());
        assert!(serde_json::from_str::<Weight>("[1, \"2\"]").is_err());
    }

    #[test]
    fn matrix_apply() {
        let m = IntegerMatrix::from_int_rows(&[&[0, -1], &[1, 0]]);
        assert_eq!(m.apply(&w(&[3, 4])), w(&[-4, 3]));
    }
}
