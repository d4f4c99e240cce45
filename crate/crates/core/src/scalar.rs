//! The field of rational functions in the level indeterminates.
//!
//! A [`Scalar`] is stored as a reduced fraction of integer polynomials. The
//! canonical form has coprime numerator and denominator, no common integer
//! factor across both, and a denominator with positive leading coefficient.
//! Equality of scalars is therefore structural.

use crate::error::{Error, Result};
use crate::poly::{Poly, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            num: Poly::from_int(n),
            den: Poly::one(),
        }
    }

    pub fn from_q(q: Q) -> Self {
        Scalar::from_fraction(Poly::constant(q), Poly::one())
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::from_q(Q::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn var(name: &str) -> Self {
        Scalar {
            num: Poly::var(name),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar::from_fraction(p, Poly::one())
    }

    /// Build `num/den` in canonical form. Panics when `den` is zero.
    pub fn from_fraction(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar::zero();
        }
        let (mut num, mut den) = if den.is_constant() || num.is_constant() {
            (num, den)
        } else {
            let g = Poly::gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.div_exact(&g).expect("gcd divides"),
                    den.div_exact(&g).expect("gcd divides"),
                )
            }
        };
        // Clear coefficient denominators, then remove the common integer factor.
        let (l1, _) = num.integer_content();
        let (l2, _) = den.integer_content();
        let scale = Q::from_integer(num_integer::Integer::lcm(&l1, &l2));
        num = num.scale(&scale);
        den = den.scale(&scale);
        let mut g = BigInt::zero();
        for (_, c) in num.terms().chain(den.terms()) {
            g = num_integer::Integer::gcd(&g, c.numer());
        }
        if !g.is_zero() && !g.is_one() {
            let inv = Q::new(BigInt::one(), g);
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if den.is_negative_leading() {
            num = -&num;
            den = -&den;
        }
        Scalar { num, den }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the scalar does not depend on any indeterminate.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<Q> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        let q = self.as_rational()?;
        if q.is_integer() {
            Some(q.to_integer())
        } else {
            None
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| n.to_i64())
    }

    pub fn is_integer(&self) -> bool {
        self.as_integer().is_some()
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(Scalar::from_fraction(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &Scalar) -> Option<Scalar> {
        Some(self * &o.inv()?)
    }

    pub fn powi(&self, e: i32) -> Option<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        Some(out)
    }

    pub fn parse(s: &str) -> Result<Scalar> {
        Parser::new(s).parse_all()
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.den == o.den {
            return Scalar::from_fraction(&self.num + &o.num, self.den.clone());
        }
        Scalar::from_fraction(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        Scalar::from_fraction(&self.num * &o.num, &self.den * &o.den)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl std::ops::$tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { (&self).$m(&o) }
        }
        impl std::ops::$tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Q> for Scalar {
    fn from(q: Q) -> Self {
        Scalar::from_q(q)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        if self.den.is_one() {
            if self.num.num_terms() == 1 {
                return write!(f, "{}", self.num);
            }
            return write!(f, "({})", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scalar::parse(s)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Scalar::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    End,
}

/// Recursive-descent parser for rational expressions in named variables.
///
/// ```text
/// expr  := term (('+'|'-') term)*
/// term  := unary (('*'|'/') unary | unary)*      juxtaposition multiplies
/// unary := ('-'|'+') unary | power
/// power := atom ('^' '-'? integer)?
/// atom  := integer | identifier | '(' expr ')'
/// ```
struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    i: usize,
    err: Option<Error>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let mut toks = Vec::new();
        let mut err = None;
        let b = src.as_bytes();
        let mut i = 0;
        while i < b.len() {
            let c = b[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let s = i;
                while i < b.len() && (b[i] as char).is_ascii_digit() {
                    i += 1;
                }
                toks.push((Tok::Num(src[s..i].parse().expect("digits")), s));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let s = i;
                while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(src[s..i].to_string()), s));
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Op(c), i));
                i += 1;
            } else {
                err.get_or_insert(Error::parse(src, i, format!("unexpected character '{c}'")));
                i += 1;
            }
        }
        toks.push((Tok::End, src.len()));
        Parser { src, toks, i: 0, err }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::parse(self.src, self.pos(), msg))
    }

    fn parse_all(mut self) -> Result<Scalar> {
        if let Some(e) = self.err.take() {
            return Err(e);
        }
        if *self.peek() == Tok::End {
            return self.fail("empty expression");
        }
        let v = self.expr()?;
        if *self.peek() != Tok::End {
            return self.fail("unexpected trailing input");
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Op('/') => {
                    self.bump();
                    let p = self.pos();
                    let d = self.unary()?;
                    acc = acc
                        .checked_div(&d)
                        .ok_or_else(|| Error::parse(self.src, p, "division by zero"))?;
                }
                Tok::Num(_) | Tok::Ident(_) | Tok::Op('(') => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let neg = if *self.peek() == Tok::Op('-') {
            self.bump();
            true
        } else {
            false
        };
        let p = self.pos();
        match self.bump() {
            Tok::Num(n) => {
                let e = n
                    .to_i32()
                    .filter(|e| *e <= 64)
                    .ok_or_else(|| Error::parse(self.src, p, "exponent too large"))?;
                let e = if neg { -e } else { e };
                base.powi(e)
                    .ok_or_else(|| Error::parse(self.src, p, "zero to a negative power"))
            }
            _ => Err(Error::parse(self.src, p, "expected integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Scalar> {
        let p = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok(Scalar::from_q(Q::from_integer(n))),
            Tok::Ident(s) => Ok(Scalar::var(&s)),
            Tok::Op('(') => {
                let v = self.expr()?;
                if *self.peek() != Tok::Op(')') {
                    return self.fail("expected ')'");
                }
                self.bump();
                Ok(v)
            }
            Tok::End => Err(Error::parse(self.src, p, "unexpected end of input")),
            Tok::Op(c) => Err(Error::parse(self.src, p, format!("unexpected '{c}'"))),
        }
    }
}

impl Scalar {
    /// Sign of a constant scalar, if constant.
    pub fn constant_sign(&self) -> Option<i32> {
        self.as_rational().map(|q| {
            if q.is_positive() {
                1
            } else if q.is_negative() {
                -1
            } else {
                0
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        Scalar::parse(x).unwrap()
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(s("-k-4").to_string(), "(-k-4)");
        assert_eq!(s("-k/(k+1)").to_string(), "(-k)/(k+1)");
        assert_eq!(s("k").to_string(), "k");
        assert_eq!(s("3/(4*(k+2))").to_string(), "(3)/(4k+8)");
        assert_eq!(s("1/2").to_string(), "1/2");
        assert_eq!(s("(k^2-1)/(k+1)").to_string(), "(k-1)");
    }

    #[test]
    fn shared_integer_factor_removed() {
        assert_eq!(s("(2k+2)/(4k)"), s("(k+1)/(2k)"));
        assert_eq!(s("(k/2)/(k+1)").to_string(), "(k)/(2k+2)");
    }

    #[test]
    fn round_trip_display() {
        for x in ["(-k)/(k+1)", "(2k^2+j)/(j*k-3)", "-5/7", "(k1*k2+1)"] {
            let v = s(x);
            assert_eq!(s(&v.to_string()), v, "{x}");
        }
    }

    #[test]
    fn parse_errors_have_positions() {
        match Scalar::parse("k + $") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(Scalar::parse("(k+1").is_err());
        assert!(Scalar::parse("1/(k-k)").is_err());
    }

    #[test]
    fn field_laws_on_samples() {
        let a = s("(k+2)/(k-1)");
        let b = s("k^2/(3k+1)");
        assert_eq!(&(&a * &b) * &b.inv().unwrap(), a);
        assert_eq!(&(&a + &b) - &b, a);
    }
}
