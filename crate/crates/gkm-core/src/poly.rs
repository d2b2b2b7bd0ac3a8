//! Sparse multivariate polynomials over Q.
//!
//! Variables are t1, .., tn, one per circle factor of the torus; a weight
//! w in Z^n corresponds to the linear form l(w) = w_1 t_1 + .. + w_n t_n.
//! Terms are kept in a canonical lex order on exponent vectors, with zero
//! coefficients never stored, so structural equality is semantic equality.
//!
//! Exact division by a linear form is the engine behind both localization
//! and the edge divisibility test: f is divisible by l(w) exactly when f
//! vanishes on the hyperplane l(w) = 0.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::Weight;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
}

/// Exponent vector; index i is the exponent of t(i+1).
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Polynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn integer(nvars: usize, n: i64) -> Self {
        Polynomial::constant(nvars, BigRational::from_integer(BigInt::from(n)))
    }

    /// The variable t(index+1).
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut exps = vec![0u32; nvars];
        exps[index] = 1;
        Polynomial::monomial(nvars, exps, BigRational::one())
    }

    pub fn monomial(nvars: usize, exps: Monomial, coeff: BigRational) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut p = Polynomial::zero(nvars);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &[u32]) -> BigRational {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Some(c) when the polynomial is the constant c (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (mono, c) = self.terms.iter().next().unwrap();
                mono.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Max total degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Some(d) when every term has total degree d; None when inhomogeneous
    /// or zero (zero is homogeneous of every degree, callers check is_zero).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|m| m.iter().sum::<u32>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// The sum of terms of total degree exactly d.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.iter().sum::<u32>() == d {
                p.terms.insert(m.clone(), c.clone());
            }
        }
        p
    }

    pub fn scale(&self, k: &BigRational) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one(self.nvars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    fn insert_term(&mut self, mono: Monomial, coeff: BigRational) {
        use std::collections::btree_map::Entry;
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Simultaneous substitution t(i+1) -> images[i]. All images must share
    /// a variable count, which becomes the result's.
    pub fn substitute_all(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let out_vars = images.first().map_or(0, Polynomial::nvars);
        assert!(images.iter().all(|p| p.nvars == out_vars));
        let mut out = Polynomial::zero(out_vars);
        for (mono, c) in &self.terms {
            let mut term = Polynomial::constant(out_vars, c.clone());
            for (i, &e) in mono.iter().enumerate() {
                if e > 0 {
                    term = &term * &images[i].pow(e);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Substitute a single variable, leaving the rest alone.
    pub fn substitute_var(&self, var: usize, image: &Polynomial) -> Polynomial {
        assert!(var < self.nvars);
        assert_eq!(image.nvars, self.nvars);
        let images: Vec<Polynomial> = (0..self.nvars)
            .map(|i| {
                if i == var {
                    image.clone()
                } else {
                    Polynomial::var(self.nvars, i)
                }
            })
            .collect();
        self.substitute_all(&images)
    }

    pub fn parse(input: &str, nvars: usize) -> Result<Polynomial, crate::expr::ExprError> {
        crate::expr::parse_polynomial(input, nvars)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mono: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.insert_term(mono, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

fn format_monomial(mono: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in mono.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("t{}", i + 1)),
            _ => parts.push(format!("t{}^{}", i + 1, e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Descending lex on exponent vectors: leading terms first.
        for (i, (mono, coeff)) in self.terms.iter().rev().enumerate() {
            let neg = coeff.is_negative();
            let abs = coeff.abs();
            let mono_str = format_monomial(mono);
            let body = if mono_str.is_empty() {
                format!("{abs}")
            } else if abs.is_one() {
                mono_str
            } else {
                format!("{abs}*{mono_str}")
            };
            if i == 0 {
                if neg {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
            } else if neg {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

/// l(w) = w_1 t_1 + .. + w_n t_n.
pub fn linear_form(w: &Weight) -> Polynomial {
    let n = w.rank();
    let mut p = Polynomial::zero(n);
    for (i, c) in w.coords().iter().enumerate() {
        if !c.is_zero() {
            let mut exps = vec![0u32; n];
            exps[i] = 1;
            p.terms.insert(exps, BigRational::from_integer(c.clone()));
        }
    }
    p
}

/// Exact division f / l(w). Returns None when f is not a multiple, i.e.
/// when f does not vanish on the hyperplane l(w) = 0. The weight must be
/// nonzero.
pub fn divide_by_linear(f: &Polynomial, w: &Weight) -> Option<Polynomial> {
    assert_eq!(f.nvars(), w.rank(), "variable count mismatch");
    assert!(!w.is_zero(), "division by the zero form");
    let pivot = w
        .coords()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero weight");
    let w_pivot = BigRational::from_integer(w.coord(pivot).clone());
    let ell = linear_form(w);
    let mut q = Polynomial::zero(f.nvars());
    let mut r = f.clone();
    loop {
        let d = r.terms.keys().map(|m| m[pivot]).max().unwrap_or(0);
        if d == 0 {
            return r.is_zero().then_some(q);
        }
        // Top slice in the pivot variable, shifted down by one and divided
        // by the pivot coefficient, is the next quotient chunk.
        let mut chunk = Polynomial::zero(f.nvars());
        for (m, c) in &r.terms {
            if m[pivot] == d {
                let mut m2 = m.clone();
                m2[pivot] = d - 1;
                chunk.terms.insert(m2, c / &w_pivot);
            }
        }
        q = &q + &chunk;
        r = &r - &(&chunk * &ell);
    }
}

/// Exact division by an arbitrary homogeneous linear polynomial (rational
/// coefficients allowed). None when not divisible or when `ell` is not a
/// nonzero linear form.
pub fn divide_by_linear_form(f: &Polynomial, ell: &Polynomial) -> Option<Polynomial> {
    if ell.is_zero() || ell.homogeneous_degree() != Some(1) {
        return None;
    }
    let n = ell.nvars();
    let mut coeffs = vec![BigRational::zero(); n];
    for (m, c) in ell.terms() {
        let i = m.iter().position(|&e| e == 1).unwrap();
        coeffs[i] = c.clone();
    }
    // Scale to integer coordinates: L*ell = l(w), so f/ell = L*(f/l(w)).
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let w = Weight::new(
        coeffs
            .iter()
            .map(|q| q.numer() * (&lcm / q.denom()))
            .collect(),
    );
    let q = divide_by_linear(f, &w)?;
    Some(q.scale(&BigRational::from_integer(lcm)))
}

/// All elementary symmetric polynomials e_0, .., e_k of the linear forms
/// l(w_1), .., l(w_k).
pub fn all_elementary_symmetric(weights: &[Weight]) -> Vec<Polynomial> {
    assert!(!weights.is_empty(), "need at least one weight");
    let n = weights[0].rank();
    let mut e = vec![Polynomial::one(n)];
    for (idx, w) in weights.iter().enumerate() {
        let ell = linear_form(w);
        e.push(Polynomial::zero(n));
        for i in (1..=idx + 1).rev() {
            let bump = &e[i - 1] * &ell;
            e[i] = &e[i] + &bump;
        }
    }
    e
}

/// e_i of the linear forms of the given weights; zero when i exceeds the
/// number of weights.
pub fn elementary_symmetric(weights: &[Weight], i: usize) -> Polynomial {
    let all = all_elementary_symmetric(weights);
    all.get(i)
        .cloned()
        .unwrap_or_else(|| Polynomial::zero(weights[0].rank()))
}

/// Monomials of total degree d in n variables, descending lex.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn go(nvars: usize, d: u32, out: &mut Vec<Monomial>, prefix: &mut Monomial) {
        if prefix.len() == nvars {
            if d == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if prefix.len() == nvars - 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            go(nvars, d - e, out, prefix);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(nvars, d, &mut out, &mut Vec::new());
    out
}

/// Quotient of polynomials with the denominator kept as an explicit factor
/// list, so linear factors remain detectable for cancellation. The value is
/// num / product(den); an empty list means denominator 1.
#[derive(Debug, Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Vec<Polynomial>,
}

impl RationalFunction {
    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn from_polys(num: Polynomial, den: Polynomial) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        assert_eq!(num.nvars(), den.nvars(), "variable count mismatch");
        let den = if den.as_constant().map_or(false, |c| c.is_one()) {
            Vec::new()
        } else {
            vec![den]
        };
        Ok(RationalFunction { num, den })
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> Polynomial {
        let mut p = Polynomial::one(self.num.nvars());
        for f in &self.den {
            p = &p * f;
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &RationalFunction) -> RationalFunction {
        assert_eq!(self.nvars(), rhs.nvars(), "variable count mismatch");
        let num = &(&self.num * &rhs.denominator()) + &(&rhs.num * &self.denominator());
        let mut den = self.den.clone();
        den.extend(rhs.den.iter().cloned());
        RationalFunction { num, den }.simplified()
    }

    pub fn sub(&self, rhs: &RationalFunction) -> RationalFunction {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &RationalFunction) -> RationalFunction {
        assert_eq!(self.nvars(), rhs.nvars(), "variable count mismatch");
        let mut den = self.den.clone();
        den.extend(rhs.den.iter().cloned());
        RationalFunction {
            num: &self.num * &rhs.num,
            den,
        }
        .simplified()
    }

    pub fn div(&self, rhs: &RationalFunction) -> Result<RationalFunction, PolyError> {
        if rhs.num.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        let mut num = self.num.clone();
        for f in &rhs.den {
            num = &num * f;
        }
        let mut den = self.den.clone();
        den.push(rhs.num.clone());
        Ok(RationalFunction { num, den }.simplified())
    }

    /// Fold constant factors into the numerator and cancel denominator
    /// factors that are linear forms dividing the numerator. Factors that
    /// are neither constants nor linear are left in place.
    pub fn simplified(&self) -> RationalFunction {
        let mut num = self.num.clone();
        let mut den = Vec::new();
        for f in &self.den {
            if let Some(c) = f.as_constant() {
                // constructor and ops keep factors nonzero
                num = num.scale(&c.recip());
            } else if !num.is_zero() {
                match divide_by_linear_form(&num, f) {
                    Some(q) => num = q,
                    None => den.push(f.clone()),
                }
            } else {
                den.push(f.clone());
            }
        }
        if num.is_zero() {
            den.clear();
        }
        RationalFunction { num, den }
    }

    /// Some(p) when the value is a polynomial, i.e. the denominator fully
    /// cancels.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        let s = self.simplified();
        if s.den.is_empty() {
            Some(s.num)
        } else {
            None
        }
    }
}

/// Cross-multiplication equality: a/b = c/d iff a*d = c*b.
impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.denominator() == &other.num * &self.denominator()
    }
}

impl Eq for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ({})", self.num, self.denominator())
    }
}
