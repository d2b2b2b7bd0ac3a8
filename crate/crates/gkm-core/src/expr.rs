//! Parsing and evaluation of polynomial-style expressions.
//!
//! One grammar serves every textual input: polynomial literals such as
//! `2*t1^2 - t1*t2`, presentation relation strings over named generators,
//! and class expressions fed to integration. The same strings the display
//! code emits parse back to equal values.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | atom
//! atom    := primary ('^' UINT)*
//! primary := UINT | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers `t1`, `t2`, .. are reserved for the torus variables; other
//! identifiers resolve through the evaluating algebra. Division is only
//! defined by nonzero constants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("division is only defined by a nonzero constant")]
    NonConstantDivisor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent out of range")]
    ExponentOutOfRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Integer(BigInt),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Integer(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, ExprError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                tokens.push((i, Token::Plus));
                i += 1;
            }
            b'-' => {
                tokens.push((i, Token::Minus));
                i += 1;
            }
            b'*' => {
                tokens.push((i, Token::Star));
                i += 1;
            }
            b'/' => {
                tokens.push((i, Token::Slash));
                i += 1;
            }
            b'^' => {
                tokens.push((i, Token::Caret));
                i += 1;
            }
            b'(' => {
                tokens.push((i, Token::LParen));
                i += 1;
            }
            b')' => {
                tokens.push((i, Token::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = BigInt::parse_bytes(&bytes[start..i], 10).unwrap();
                tokens.push((start, Token::Integer(n)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push((start, Token::Ident(input[start..i].to_string())));
            }
            _ => {
                return Err(ExprError::Parse {
                    pos: i,
                    msg: format!("unexpected character `{}`", &input[i..i + 1]),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    input_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or(self.input_len, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<(), ExprError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ExprError::Parse {
                pos: self.here(),
                msg: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let mut base = self.primary()?;
        while self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let pos = self.here();
            match self.bump() {
                Some(Token::Integer(n)) => {
                    let e = u32::try_from(&n).map_err(|_| ExprError::ExponentOutOfRange)?;
                    base = Expr::Pow(Box::new(base), e);
                }
                _ => {
                    return Err(ExprError::Parse {
                        pos,
                        msg: "expected a non-negative integer exponent".to_string(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let pos = self.here();
        match self.bump() {
            Some(Token::Integer(n)) => Ok(Expr::Integer(n)),
            Some(Token::Ident(name)) => Ok(Expr::Ident(name)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(ExprError::Parse {
                pos,
                msg: "expected an integer, identifier, or `(`".to_string(),
            }),
        }
    }
}

pub fn parse_expr(input: &str) -> Result<Expr, ExprError> {
    let tokens = tokenize(input)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        input_len: input.len(),
    };
    let expr = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(ExprError::Parse {
            pos: parser.here(),
            msg: "trailing input".to_string(),
        });
    }
    Ok(expr)
}

/// Value domain an expression evaluates into.
pub trait ExprAlgebra {
    type Value: Clone;
    fn integer(&self, n: &BigInt) -> Self::Value;
    fn ident(&self, name: &str) -> Result<Self::Value, ExprError>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    /// Division: only by a value that is a nonzero constant.
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, ExprError>;
    fn one(&self) -> Self::Value;

    fn pow(&self, a: &Self::Value, e: u32) -> Self::Value {
        let mut out = self.one();
        for _ in 0..e {
            out = self.mul(&out, a);
        }
        out
    }
}

pub fn evaluate<A: ExprAlgebra>(expr: &Expr, algebra: &A) -> Result<A::Value, ExprError> {
    match expr {
        Expr::Integer(n) => Ok(algebra.integer(n)),
        Expr::Ident(name) => algebra.ident(name),
        Expr::Neg(a) => Ok(algebra.neg(&evaluate(a, algebra)?)),
        Expr::Add(a, b) => Ok(algebra.add(&evaluate(a, algebra)?, &evaluate(b, algebra)?)),
        Expr::Sub(a, b) => Ok(algebra.sub(&evaluate(a, algebra)?, &evaluate(b, algebra)?)),
        Expr::Mul(a, b) => Ok(algebra.mul(&evaluate(a, algebra)?, &evaluate(b, algebra)?)),
        Expr::Div(a, b) => algebra.div(&evaluate(a, algebra)?, &evaluate(b, algebra)?),
        Expr::Pow(a, e) => Ok(algebra.pow(&evaluate(a, algebra)?, *e)),
    }
}

/// Resolve `t1`, .., `tn` when `name` is a reserved torus variable within
/// range; `None` for everything else.
pub fn torus_variable(name: &str, nvars: usize) -> Option<usize> {
    let rest = name.strip_prefix('t')?;
    if rest.is_empty() || rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let k: usize = rest.parse().ok()?;
    (k >= 1 && k <= nvars).then(|| k - 1)
}

/// Evaluation into polynomials: torus variables plus a set of named
/// polynomial values (presentation generators, abbreviations).
pub struct PolyAlgebra<'a> {
    nvars: usize,
    env: Option<&'a BTreeMap<String, Polynomial>>,
}

impl<'a> PolyAlgebra<'a> {
    pub fn new(nvars: usize) -> Self {
        PolyAlgebra { nvars, env: None }
    }

    pub fn with_env(nvars: usize, env: &'a BTreeMap<String, Polynomial>) -> Self {
        assert!(env.values().all(|p| p.nvars() == nvars));
        PolyAlgebra {
            nvars,
            env: Some(env),
        }
    }
}

impl ExprAlgebra for PolyAlgebra<'_> {
    type Value = Polynomial;

    fn integer(&self, n: &BigInt) -> Polynomial {
        Polynomial::constant(self.nvars, BigRational::from_integer(n.clone()))
    }

    fn ident(&self, name: &str) -> Result<Polynomial, ExprError> {
        if let Some(i) = torus_variable(name, self.nvars) {
            return Ok(Polynomial::var(self.nvars, i));
        }
        if let Some(p) = self.env.and_then(|e| e.get(name)) {
            return Ok(p.clone());
        }
        Err(ExprError::UnknownIdentifier(name.to_string()))
    }

    fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a + b
    }

    fn sub(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a - b
    }

    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a * b
    }

    fn neg(&self, a: &Polynomial) -> Polynomial {
        -a
    }

    fn div(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial, ExprError> {
        let c = b.as_constant().ok_or(ExprError::NonConstantDivisor)?;
        if c.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(a.scale(&c.recip()))
    }

    fn one(&self) -> Polynomial {
        Polynomial::one(self.nvars)
    }
}

pub fn parse_polynomial(input: &str, nvars: usize) -> Result<Polynomial, ExprError> {
    let expr = parse_expr(input)?;
    evaluate(&expr, &PolyAlgebra::new(nvars))
}

/// Parse against named polynomial values in addition to the torus
/// variables; used for presentation relations.
pub fn parse_polynomial_with_env(
    input: &str,
    nvars: usize,
    env: &BTreeMap<String, Polynomial>,
) -> Result<Polynomial, ExprError> {
    let expr = parse_expr(input)?;
    evaluate(&expr, &PolyAlgebra::with_env(nvars, env))
}
