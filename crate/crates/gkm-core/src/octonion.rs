//! Exact rational octonion arithmetic.
//!
//! Two bilinear multiplication rules on Q^8 are implemented over the basis
//! e0 = 1, e1..e7. Rule I views an element as a pair of quaternions
//! (x0 + x1 i + x2 j + x3 k, x4 + x5 i + x6 j + x7 k) and multiplies by
//!
//! > (p1, q1)(p2, q2) = (p1 p2 - conj(q2) q1, q2 p1 + q1 conj(p2)).
//!
//! Rule II views an element as a + m with a = x0 + x1 i in C and
//! m = (x2 + x3 i, x4 + x5 i, x6 + x7 i) in C^3 and multiplies by
//!
//! > (a + m)(b + n) = (ab - <m, n>) + (a n + conj(b) m - conj(m x n)),
//!
//! with <m, n> = sum_i m_i conj(n_i) and the usual cross product. Both rules
//! make e0 a two-sided identity, anticommute the imaginary units, and are
//! composition algebras: |xy|^2 = |x|^2 |y|^2. Negating the e6 coordinate is
//! an algebra isomorphism from rule I to rule II ([`iso_13`]).
//!
//! On the unit sphere of imaginary elements, left multiplication by the base
//! point squares to -1 on the tangent space ([`s6_tangent_J`]); on the
//! product of the unit spheres of span(e1..e3) and span(e0, e4..e7), the
//! same role is played by left multiplication with n2 n1
//! ([`s2s4_tangent_J`]). Everything is exact; random checks sample rational
//! points via stereographic projection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OctonionError {
    #[error("parameter must be a unit quaternion, found |s|^2 = {0}")]
    NotUnit(BigRational),
    #[error("expected an imaginary octonion")]
    NotImaginary,
    #[error("point is not on the sphere: {0}")]
    NotOnSphere(String),
    #[error("vector is not tangent: {0}")]
    NotTangent(String),
    #[error("matrix is not special unitary: {0}")]
    NotSpecialUnitary(String),
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// A quaternion with rational coordinates over 1, i, j, k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quaternion([BigRational; 4]);

impl Quaternion {
    pub fn new(coords: [BigRational; 4]) -> Self {
        Quaternion(coords)
    }

    pub fn from_ints(coords: [i64; 4]) -> Self {
        Quaternion(coords.map(rat))
    }

    pub fn zero() -> Self {
        Quaternion::from_ints([0, 0, 0, 0])
    }

    pub fn one() -> Self {
        Quaternion::from_ints([1, 0, 0, 0])
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.0
    }

    pub fn re(&self) -> &BigRational {
        &self.0[0]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn conj(&self) -> Quaternion {
        let [a, b, c, d] = &self.0;
        Quaternion([a.clone(), -b, -c, -d])
    }

    pub fn norm_sq(&self) -> BigRational {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.norm_sq().is_one()
    }

    pub fn inverse(&self) -> Option<Quaternion> {
        let n = self.norm_sq();
        if n.is_zero() {
            return None;
        }
        Some(self.conj().scale(&n.recip()))
    }

    pub fn scale(&self, k: &BigRational) -> Quaternion {
        Quaternion([0, 1, 2, 3].map(|i| &self.0[i] * k))
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: &Quaternion) -> Quaternion {
        Quaternion([0, 1, 2, 3].map(|i| &self.0[i] + &rhs.0[i]))
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: &Quaternion) -> Quaternion {
        Quaternion([0, 1, 2, 3].map(|i| &self.0[i] - &rhs.0[i]))
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion([0, 1, 2, 3].map(|i| -&self.0[i]))
    }
}

impl Mul for &Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: &Quaternion) -> Quaternion {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &rhs.0;
        Quaternion([
            a * e - b * f - c * g - d * h,
            a * f + b * e + c * h - d * g,
            a * g - b * h + c * e + d * f,
            a * h + b * g - c * f + d * e,
        ])
    }
}

/// A complex number with rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    pub re: BigRational,
    pub im: BigRational,
}

impl Complex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Complex { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Complex::new(rat(re), rat(im))
    }

    pub fn zero() -> Self {
        Complex::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Complex::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Complex::from_ints(0, 1)
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        Complex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

/// An octonion with rational coordinates over e0 = 1, e1..e7.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Octonion([BigRational; 8]);

const IDX: [usize; 8] = [0, 1, 2, 3, 4, 5, 6, 7];

impl Octonion {
    pub fn new(coords: [BigRational; 8]) -> Self {
        Octonion(coords)
    }

    pub fn from_ints(coords: [i64; 8]) -> Self {
        Octonion(coords.map(rat))
    }

    pub fn zero() -> Self {
        Octonion::from_ints([0; 8])
    }

    pub fn one() -> Self {
        Octonion::basis(0)
    }

    /// The basis element e_k, 0 <= k <= 7.
    pub fn basis(k: usize) -> Self {
        let mut coords = [0i64; 8];
        coords[k] = 1;
        Octonion::from_ints(coords)
    }

    pub fn coords(&self) -> &[BigRational; 8] {
        &self.0
    }

    pub fn re(&self) -> &BigRational {
        &self.0[0]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_imaginary(&self) -> bool {
        self.0[0].is_zero()
    }

    pub fn conj(&self) -> Octonion {
        let mut coords = self.0.clone().map(|c| -c);
        coords[0] = -&coords[0];
        Octonion(coords)
    }

    pub fn norm_sq(&self) -> BigRational {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn scale(&self, k: &BigRational) -> Octonion {
        Octonion(IDX.map(|i| &self.0[i] * k))
    }

    /// The standard inner product on Q^8.
    pub fn inner(&self, other: &Octonion) -> BigRational {
        (0..8).map(|i| &self.0[i] * &other.0[i]).sum()
    }

    pub fn as_quaternion_pair(&self) -> (Quaternion, Quaternion) {
        let x = &self.0;
        (
            Quaternion([x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()]),
            Quaternion([x[4].clone(), x[5].clone(), x[6].clone(), x[7].clone()]),
        )
    }

    pub fn from_quaternion_pair(p: &Quaternion, q: &Quaternion) -> Octonion {
        let a = p.coords();
        let b = q.coords();
        Octonion([
            a[0].clone(),
            a[1].clone(),
            a[2].clone(),
            a[3].clone(),
            b[0].clone(),
            b[1].clone(),
            b[2].clone(),
            b[3].clone(),
        ])
    }

    /// The C + C^3 split: a = x0 + x1 i, m = (x2 + x3 i, x4 + x5 i, x6 + x7 i).
    pub fn as_complex_split(&self) -> (Complex, [Complex; 3]) {
        let x = &self.0;
        (
            Complex::new(x[0].clone(), x[1].clone()),
            [
                Complex::new(x[2].clone(), x[3].clone()),
                Complex::new(x[4].clone(), x[5].clone()),
                Complex::new(x[6].clone(), x[7].clone()),
            ],
        )
    }

    pub fn from_complex_split(a: &Complex, m: &[Complex; 3]) -> Octonion {
        Octonion([
            a.re.clone(),
            a.im.clone(),
            m[0].re.clone(),
            m[0].im.clone(),
            m[1].re.clone(),
            m[1].im.clone(),
            m[2].re.clone(),
            m[2].im.clone(),
        ])
    }
}

impl Add for &Octonion {
    type Output = Octonion;
    fn add(self, rhs: &Octonion) -> Octonion {
        Octonion(IDX.map(|i| &self.0[i] + &rhs.0[i]))
    }
}

impl Sub for &Octonion {
    type Output = Octonion;
    fn sub(self, rhs: &Octonion) -> Octonion {
        Octonion(IDX.map(|i| &self.0[i] - &rhs.0[i]))
    }
}

impl Neg for &Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion(IDX.map(|i| -&self.0[i]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MulVariant {
    I,
    II,
}

/// x * y under the chosen multiplication rule.
pub fn mul(x: &Octonion, y: &Octonion, variant: MulVariant) -> Octonion {
    match variant {
        MulVariant::I => {
            let (p1, q1) = x.as_quaternion_pair();
            let (p2, q2) = y.as_quaternion_pair();
            let first = &(&p1 * &p2) - &(&q2.conj() * &q1);
            let second = &(&q2 * &p1) + &(&q1 * &p2.conj());
            Octonion::from_quaternion_pair(&first, &second)
        }
        MulVariant::II => {
            let (a, m) = x.as_complex_split();
            let (b, n) = y.as_complex_split();
            let herm: Complex = [0, 1, 2]
                .iter()
                .fold(Complex::zero(), |acc, &i| &acc + &(&m[i] * &n[i].conj()));
            let scalar = &(&a * &b) - &herm;
            let cross = [
                &(&m[1] * &n[2]) - &(&m[2] * &n[1]),
                &(&m[2] * &n[0]) - &(&m[0] * &n[2]),
                &(&m[0] * &n[1]) - &(&m[1] * &n[0]),
            ];
            let vector =
                [0, 1, 2].map(|i| &(&(&a * &n[i]) + &(&b.conj() * &m[i])) - &cross[i].conj());
            Octonion::from_complex_split(&scalar, &vector)
        }
    }
}

/// The pair formula with first component p1 q1 - conj(q2) q1 instead of
/// p1 p2 - conj(q2) q1. Kept only as evidence: it fails the left-identity
/// axiom, which the consistency report records.
pub fn mul_rule_i_as_printed(x: &Octonion, y: &Octonion) -> Octonion {
    let (p1, q1) = x.as_quaternion_pair();
    let (_, q2) = y.as_quaternion_pair();
    let (p2, _) = y.as_quaternion_pair();
    let first = &(&p1 * &q1) - &(&q2.conj() * &q1);
    let second = &(&q2 * &p1) + &(&q1 * &p2.conj());
    Octonion::from_quaternion_pair(&first, &second)
}

/// (xy)z - x(yz).
pub fn associator(x: &Octonion, y: &Octonion, z: &Octonion, variant: MulVariant) -> Octonion {
    &mul(&mul(x, y, variant), z, variant) - &mul(x, &mul(y, z, variant), variant)
}

/// Signed basis products e_i e_j for 1 <= i, j <= 7, encoded (sign, index).
/// Index 0 with sign -1 encodes -e0.
type Table = [[(i8, usize); 7]; 7];

const TABLE_I: Table = [
    [(-1, 0), (1, 3), (-1, 2), (1, 5), (-1, 4), (-1, 7), (1, 6)],
    [(-1, 3), (-1, 0), (1, 1), (1, 6), (1, 7), (-1, 4), (-1, 5)],
    [(1, 2), (-1, 1), (-1, 0), (1, 7), (-1, 6), (1, 5), (-1, 4)],
    [(-1, 5), (-1, 6), (-1, 7), (-1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 4), (-1, 7), (1, 6), (-1, 1), (-1, 0), (-1, 3), (1, 2)],
    [(1, 7), (1, 4), (-1, 5), (-1, 2), (1, 3), (-1, 0), (-1, 1)],
    [(-1, 6), (1, 5), (1, 4), (-1, 3), (-1, 2), (1, 1), (-1, 0)],
];

const TABLE_II: Table = [
    [(-1, 0), (1, 3), (-1, 2), (1, 5), (-1, 4), (1, 7), (-1, 6)],
    [(-1, 3), (-1, 0), (1, 1), (-1, 6), (1, 7), (1, 4), (-1, 5)],
    [(1, 2), (-1, 1), (-1, 0), (1, 7), (1, 6), (-1, 5), (-1, 4)],
    [(-1, 5), (1, 6), (-1, 7), (-1, 0), (1, 1), (-1, 2), (1, 3)],
    [(1, 4), (-1, 7), (-1, 6), (-1, 1), (-1, 0), (1, 3), (1, 2)],
    [(-1, 7), (-1, 4), (1, 5), (1, 2), (-1, 3), (-1, 0), (1, 1)],
    [(1, 6), (1, 5), (1, 4), (-1, 3), (-1, 2), (-1, 1), (-1, 0)],
];

/// The tabulated product e_i e_j, 0 <= i, j <= 7.
pub fn basis_product(i: usize, j: usize, variant: MulVariant) -> Octonion {
    if i == 0 {
        return Octonion::basis(j);
    }
    if j == 0 {
        return Octonion::basis(i);
    }
    let table = match variant {
        MulVariant::I => &TABLE_I,
        MulVariant::II => &TABLE_II,
    };
    let (sign, k) = table[i - 1][j - 1];
    let e = Octonion::basis(k);
    if sign < 0 {
        -&e
    } else {
        e
    }
}

/// The coordinate map negating e6, i.e. a + (m1, m2, m3) with m3 replaced by
/// -conj(m3). It is an algebra isomorphism from rule I to rule II and an
/// involution.
pub fn iso_13(x: &Octonion) -> Octonion {
    let mut coords = x.0.clone();
    coords[6] = -&coords[6];
    Octonion(coords)
}

fn require_unit(s: &Quaternion) -> Result<(), OctonionError> {
    if s.is_unit() {
        Ok(())
    } else {
        Err(OctonionError::NotUnit(s.norm_sq()))
    }
}

/// The automorphism (p, q) -> (s p s^-1, q s^-1) of rule I, for a unit
/// quaternion s.
pub fn phi(s: &Quaternion, x: &Octonion) -> Result<Octonion, OctonionError> {
    require_unit(s)?;
    let s_inv = s.conj();
    let (p, q) = x.as_quaternion_pair();
    Ok(Octonion::from_quaternion_pair(
        &(&(s * &p) * &s_inv),
        &(&q * &s_inv),
    ))
}

/// The automorphism (p, q) -> (p, t q) of rule I, for a unit quaternion t.
pub fn psi(t: &Quaternion, x: &Octonion) -> Result<Octonion, OctonionError> {
    require_unit(t)?;
    let (p, q) = x.as_quaternion_pair();
    Ok(Octonion::from_quaternion_pair(&p, &(t * &q)))
}

/// The complex structure on the unit sphere of imaginary octonions: v -> uv
/// under rule I. Requires u imaginary of norm 1 and v imaginary orthogonal
/// to u; the result stays tangent at u, and applying the map twice gives -v.
#[allow(non_snake_case)]
pub fn s6_tangent_J(u: &Octonion, v: &Octonion) -> Result<Octonion, OctonionError> {
    if !u.is_imaginary() || !v.is_imaginary() {
        return Err(OctonionError::NotImaginary);
    }
    let n = u.norm_sq();
    if !n.is_one() {
        return Err(OctonionError::NotOnSphere(format!("|u|^2 = {n}")));
    }
    let pairing = u.inner(v);
    if !pairing.is_zero() {
        return Err(OctonionError::NotTangent(format!("(u, v) = {pairing}")));
    }
    Ok(mul(u, v, MulVariant::I))
}

/// The two unit-sphere factors of a point of S^2 x S^4: n1 spans e1..e3,
/// n2 spans e0 and e4..e7.
pub fn sphere_factors(u: &Octonion) -> (Octonion, Octonion) {
    let mut n1 = [0i64; 8].map(|_| BigRational::zero());
    let mut n2 = n1.clone();
    for i in 1..4 {
        n1[i] = u.0[i].clone();
    }
    n2[0] = u.0[0].clone();
    for i in 4..8 {
        n2[i] = u.0[i].clone();
    }
    (Octonion(n1), Octonion(n2))
}

/// The complex structure on S^2 x S^4 at u = n1 + n2: v -> (n2 n1) v under
/// rule I. Requires |n1| = |n2| = 1 and v orthogonal to both factors; the
/// result stays tangent, and (n2 n1)^2 = -1 gives J^2 = -id.
#[allow(non_snake_case)]
pub fn s2s4_tangent_J(u: &Octonion, v: &Octonion) -> Result<Octonion, OctonionError> {
    let (n1, n2) = sphere_factors(u);
    for (name, n) in [("n1", &n1), ("n2", &n2)] {
        let sq = n.norm_sq();
        if !sq.is_one() {
            return Err(OctonionError::NotOnSphere(format!("|{name}|^2 = {sq}")));
        }
    }
    for (name, n) in [("n1", &n1), ("n2", &n2)] {
        let pairing = n.inner(v);
        if !pairing.is_zero() {
            return Err(OctonionError::NotTangent(format!(
                "({name}, v) = {pairing}"
            )));
        }
    }
    Ok(mul(&mul(&n2, &n1, MulVariant::I), v, MulVariant::I))
}

/// Matrix-vector action a + m -> a + Am on the C + C^3 split.
pub fn su3_apply(a: &[[Complex; 3]; 3], x: &Octonion) -> Octonion {
    let (scalar, m) = x.as_complex_split();
    let image = [0, 1, 2].map(|i| {
        [0, 1, 2]
            .iter()
            .fold(Complex::zero(), |acc, &j| &acc + &(&a[i][j] * &m[j]))
    });
    Octonion::from_complex_split(&scalar, &image)
}

fn su3_check(a: &[[Complex; 3]; 3]) -> Result<(), OctonionError> {
    // A^dagger A = I.
    for i in 0..3 {
        for j in 0..3 {
            let entry = (0..3).fold(Complex::zero(), |acc, k| {
                &acc + &(&a[k][i].conj() * &a[k][j])
            });
            let expected = if i == j {
                Complex::one()
            } else {
                Complex::zero()
            };
            if entry != expected {
                return Err(OctonionError::NotSpecialUnitary(format!(
                    "(A^*A)[{i}][{j}] = {} + {} i",
                    entry.re, entry.im
                )));
            }
        }
    }
    let det = {
        let m = a;
        let term = |i: usize, j: usize, k: usize| &(&m[0][i] * &m[1][j]) * &m[2][k];
        let pos = &(&term(0, 1, 2) + &term(1, 2, 0)) + &term(2, 0, 1);
        let neg = &(&term(2, 1, 0) + &term(1, 0, 2)) + &term(0, 2, 1);
        &pos - &neg
    };
    if det != Complex::one() {
        return Err(OctonionError::NotSpecialUnitary(format!(
            "det = {} + {} i",
            det.re, det.im
        )));
    }
    Ok(())
}

/// Whether the action a + m -> a + Am of a special unitary matrix preserves
/// rule II multiplication on `trials` random rational pairs.
pub fn su3_preserves(a: &[[Complex; 3]; 3], trials: usize) -> Result<bool, OctonionError> {
    su3_check(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5u64);
    for _ in 0..trials {
        let x = sample_octonion(&mut rng);
        let y = sample_octonion(&mut rng);
        let lhs = su3_apply(a, &mul(&x, &y, MulVariant::II));
        let rhs = mul(&su3_apply(a, &x), &su3_apply(a, &y), MulVariant::II);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn sample_rational(rng: &mut impl Rng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(-6i64..=6)),
        BigInt::from(rng.gen_range(1i64..=4)),
    )
}

pub fn sample_octonion(rng: &mut impl Rng) -> Octonion {
    Octonion(IDX.map(|_| sample_rational(rng)))
}

pub fn sample_quaternion(rng: &mut impl Rng) -> Quaternion {
    Quaternion([0; 4].map(|_| sample_rational(rng)))
}

/// A rational unit quaternion: r^2 / |r|^2 for random nonzero r covers the
/// rational points of the unit sphere reachable by squaring.
pub fn sample_unit_quaternion(rng: &mut impl Rng) -> Quaternion {
    loop {
        let r = sample_quaternion(rng);
        if r.is_zero() {
            continue;
        }
        return (&r * &r).scale(&r.norm_sq().recip());
    }
}

/// Stereographic image of a rational vector inside a coordinate subspace:
/// pole * (|z|^2 - 1)/(|z|^2 + 1) + z * 2/(|z|^2 + 1), a unit vector.
fn stereographic(pole: usize, z: &Octonion) -> Octonion {
    let norm = z.norm_sq();
    let denom = &norm + BigRational::one();
    let mut u = z.scale(&(rat(2) / &denom));
    u.0[pole] = (&norm - BigRational::one()) / &denom;
    u
}

/// A random rational point of the unit sphere of imaginary octonions.
pub fn sample_s6_point(rng: &mut impl Rng) -> Octonion {
    let mut z = Octonion::zero();
    for i in 2..8 {
        z.0[i] = sample_rational(rng);
    }
    stereographic(1, &z)
}

/// A random imaginary tangent vector at u: a sample projected orthogonally
/// to u, resampled while zero.
pub fn sample_s6_tangent(u: &Octonion, rng: &mut impl Rng) -> Octonion {
    loop {
        let mut r = sample_octonion(rng);
        r.0[0] = BigRational::zero();
        let v = &r - &u.scale(&u.inner(&r));
        if !v.is_zero() {
            return v;
        }
    }
}

/// A random rational point of S^2 x S^4: unit factors in span(e1..e3) and
/// span(e0, e4..e7).
pub fn sample_s2s4_point(rng: &mut impl Rng) -> Octonion {
    let mut z1 = Octonion::zero();
    for i in 2..4 {
        z1.0[i] = sample_rational(rng);
    }
    let mut z2 = Octonion::zero();
    for i in 4..8 {
        z2.0[i] = sample_rational(rng);
    }
    &stereographic(1, &z1) + &stereographic(0, &z2)
}

/// A random tangent vector at u on S^2 x S^4: a sample projected against
/// both unit factors, resampled while zero.
pub fn sample_s2s4_tangent(u: &Octonion, rng: &mut impl Rng) -> Octonion {
    let (n1, n2) = sphere_factors(u);
    loop {
        let r = sample_octonion(rng);
        let v = &(&r - &n1.scale(&n1.inner(&r))) - &n2.scale(&n2.inner(&r));
        if !v.is_zero() {
            return v;
        }
    }
}

/// One named check of the consistency report.
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Pass/fail summary over the multiplication tables, the isomorphism between
/// the rules, the automorphism families, the sphere complex structures, and
/// the composition-algebra norm.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "items": self.items.iter().map(|i| serde_json::json!({
                "name": i.name,
                "passed": i.passed,
                "detail": i.detail,
            })).collect::<Vec<_>>(),
            "all_passed": self.all_passed(),
        })
    }
}

/// Run every structural check with a fixed seed and `trials` random samples
/// per randomized item.
pub fn check_report(trials: usize) -> CheckReport {
    let mut items = Vec::new();
    let mut push = |name: &str, passed: bool, detail: &str| {
        items.push(CheckItem {
            name: name.into(),
            passed,
            detail: detail.into(),
        })
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc5);

    for (variant, name) in [
        (MulVariant::I, "table-rule-i"),
        (MulVariant::II, "table-rule-ii"),
    ] {
        let ok = (0..8).all(|i| {
            (0..8).all(|j| {
                mul(&Octonion::basis(i), &Octonion::basis(j), variant)
                    == basis_product(i, j, variant)
            })
        });
        push(name, ok, "formula matches the table on all 64 basis pairs");
    }

    let printed_fails = (0..8).any(|j| {
        mul_rule_i_as_printed(&Octonion::one(), &Octonion::basis(j)) != Octonion::basis(j)
    });
    push(
        "printed-pair-formula-rejected",
        printed_fails,
        "the pair formula with first component p1*q1 - conj(q2)*q1 fails the \
         left-identity check; the implementation uses p1*p2 - conj(q2)*q1, \
         which reproduces the multiplication table",
    );

    let iso_hom = (0..8).all(|i| {
        (0..8).all(|j| {
            let x = Octonion::basis(i);
            let y = Octonion::basis(j);
            iso_13(&mul(&x, &y, MulVariant::I)) == mul(&iso_13(&x), &iso_13(&y), MulVariant::II)
        })
    });
    push(
        "iso-rule-i-to-ii",
        iso_hom,
        "negating the e6 coordinate carries rule I to rule II on all 64 basis pairs",
    );

    let mut auto_ok = true;
    for _ in 0..trials {
        let s = sample_unit_quaternion(&mut rng);
        let t = sample_unit_quaternion(&mut rng);
        let x = sample_octonion(&mut rng);
        let y = sample_octonion(&mut rng);
        let xy = mul(&x, &y, MulVariant::I);
        auto_ok &= phi(&s, &xy).unwrap()
            == mul(&phi(&s, &x).unwrap(), &phi(&s, &y).unwrap(), MulVariant::I);
        auto_ok &= psi(&t, &xy).unwrap()
            == mul(&psi(&t, &x).unwrap(), &psi(&t, &y).unwrap(), MulVariant::I);
        auto_ok &=
            phi(&s, &psi(&t, &x).unwrap()).unwrap() == psi(&t, &phi(&s, &x).unwrap()).unwrap();
    }
    let minus_one = Quaternion::from_ints([-1, 0, 0, 0]);
    let x = sample_octonion(&mut rng);
    auto_ok &= phi(&minus_one, &psi(&minus_one, &x).unwrap()).unwrap() == x;
    push(
        "automorphisms-phi-psi",
        auto_ok,
        "phi and psi preserve rule I, commute, and (-1, -1) acts trivially",
    );

    let mut j6_ok = true;
    for _ in 0..trials {
        let u = sample_s6_point(&mut rng);
        let v = sample_s6_tangent(&u, &mut rng);
        let jv = s6_tangent_J(&u, &v).unwrap();
        j6_ok &= u.inner(&jv).is_zero() && jv.is_imaginary();
        j6_ok &= s6_tangent_J(&u, &jv).unwrap() == -&v;
    }
    push(
        "j-squared-s6",
        j6_ok,
        "left multiplication by the base point preserves tangency and squares to -1",
    );

    let mut j24_ok = true;
    for _ in 0..trials {
        let u = sample_s2s4_point(&mut rng);
        let v = sample_s2s4_tangent(&u, &mut rng);
        let jv = s2s4_tangent_J(&u, &v).unwrap();
        let (n1, n2) = sphere_factors(&u);
        j24_ok &= n1.inner(&jv).is_zero() && n2.inner(&jv).is_zero();
        j24_ok &= s2s4_tangent_J(&u, &jv).unwrap() == -&v;
    }
    push(
        "j-squared-s2s4",
        j24_ok,
        "multiplication by n2 n1 preserves tangency to both factors and squares to -1",
    );

    let i = Complex::i;
    let zero = Complex::zero;
    let one = Complex::one;
    let neg_one = || Complex::from_ints(-1, 0);
    let diag = [
        [i(), zero(), zero()],
        [zero(), i(), zero()],
        [zero(), zero(), neg_one()],
    ];
    let cycle = [
        [zero(), zero(), one()],
        [one(), zero(), zero()],
        [zero(), one(), zero()],
    ];
    let su3_ok = su3_preserves(&diag, trials).unwrap_or(false)
        && su3_preserves(&cycle, trials).unwrap_or(false);
    push(
        "su3-action",
        su3_ok,
        "special unitary coordinate actions preserve rule II",
    );

    let mut norm_ok = true;
    for variant in [MulVariant::I, MulVariant::II] {
        for _ in 0..trials {
            let x = sample_octonion(&mut rng);
            let y = sample_octonion(&mut rng);
            norm_ok &= mul(&x, &y, variant).norm_sq() == x.norm_sq() * y.norm_sq();
        }
    }
    push(
        "norm-multiplicative",
        norm_ok,
        "|xy|^2 = |x|^2 |y|^2 under both rules",
    );

    let mut alt_ok = true;
    for variant in [MulVariant::I, MulVariant::II] {
        for i in 0..8 {
            for j in 0..8 {
                let x = Octonion::basis(i);
                let y = Octonion::basis(j);
                alt_ok &= associator(&x, &x, &y, variant).is_zero();
                alt_ok &= associator(&y, &x, &x, variant).is_zero();
            }
        }
        for _ in 0..trials {
            let x = sample_octonion(&mut rng);
            let y = sample_octonion(&mut rng);
            alt_ok &= associator(&x, &x, &y, variant).is_zero();
        }
    }
    push(
        "alternative",
        alt_ok,
        "the associator vanishes whenever two arguments coincide",
    );

    CheckReport { items }
}
