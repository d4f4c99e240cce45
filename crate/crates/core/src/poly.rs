//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are named by strings. Monomials are compared in graded
//! lexicographic order, with variables ordered alphabetically (the first name
//! is the most significant). That order fixes leading terms and the printed
//! term order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type Q = BigRational;

/// A monomial: sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(Vec<(String, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Mono(vec![(name.to_string(), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exp(&self, v: &str) -> u32 {
        self.0
            .iter()
            .find(|(n, _)| n == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut out: BTreeMap<String, u32> = BTreeMap::new();
        for (n, e) in self.0.iter().chain(o.0.iter()) {
            *out.entry(n.clone()).or_insert(0) += e;
        }
        Mono(out.into_iter().collect())
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Mono) -> Option<Mono> {
        let mut out: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (n, e) in &o.0 {
            let cur = out.get_mut(n)?;
            if *cur < *e {
                return None;
            }
            *cur -= e;
        }
        Some(Mono(out.into_iter().filter(|(_, e)| *e > 0).collect()))
    }

    /// Remove variable `v`, returning its exponent and the rest.
    fn split(&self, v: &str) -> (u32, Mono) {
        let e = self.exp(v);
        (e, Mono(self.0.iter().filter(|(n, _)| n != v).cloned().collect()))
    }

    fn with_var(&self, v: &str, e: u32) -> Mono {
        if e == 0 {
            return self.clone();
        }
        self.mul(&Mono(vec![(v.to_string(), e)]))
    }
}

/// Graded lexicographic comparison.
pub fn grlex(a: &Mono, b: &Mono) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        o => return o,
    }
    let (mut i, mut j) = (0, 0);
    let (x, y) = (&a.0, &b.0);
    while i < x.len() || j < y.len() {
        let (ea, eb);
        if j >= y.len() || (i < x.len() && x[i].0 < y[j].0) {
            ea = x[i].1;
            eb = 0;
            i += 1;
        } else if i >= x.len() || y[j].0 < x[i].0 {
            ea = 0;
            eb = y[j].1;
            j += 1;
        } else {
            ea = x[i].1;
            eb = y[j].1;
            i += 1;
            j += 1;
        }
        match ea.cmp(&eb) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(), c);
        }
        Poly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(Q::from_integer(BigInt::from(n)))
    }

    pub fn var(name: &str) -> Self {
        Poly::monomial(Mono::var(name), Q::one())
    }

    pub fn monomial(m: Mono, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }

    /// The value when the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(n, _)| n.clone()))
            .collect()
    }

    fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        let remove = {
            let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
            *e += c;
            e.is_zero()
        };
        if remove {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Leading monomial and coefficient in graded lex order.
    pub fn leading(&self) -> Option<(&Mono, &Q)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    /// Terms in descending graded lex order.
    pub fn sorted_terms(&self) -> Vec<(&Mono, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex(b.0, a.0));
        v
    }

    pub fn deg_in(&self, v: &str) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Coefficients of powers of `v`, each free of `v`.
    pub fn coeffs_in(&self, v: &str) -> Vec<Poly> {
        let d = self.deg_in(v) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    fn from_coeffs_in(v: &str, cs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in cs.iter().enumerate() {
            for (m, q) in &c.terms {
                out.add_term(m.with_var(v, e as u32), q.clone());
            }
        }
        out
    }

    /// Exact division; `None` when `b` does not divide `self`.
    pub fn div_exact(&self, b: &Poly) -> Option<Poly> {
        if b.is_zero() {
            return None;
        }
        if let Some(c) = b.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = b.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let m = rm.div(&lm)?;
            let c = rc / &lc;
            r = &r - &b.mul_mono(&m, &c);
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Pseudo-remainder of `a` by `b` as polynomials in `v`.
    fn prem(a: &Poly, b: &Poly, v: &str) -> Poly {
        let db = b.deg_in(v);
        let bc = b.coeffs_in(v);
        let lb = bc[db as usize].clone();
        let mut r = a.clone();
        while !r.is_zero() && r.deg_in(v) >= db {
            let dr = r.deg_in(v);
            let lr = r.coeffs_in(v)[dr as usize].clone();
            let shift = Mono::one().with_var(v, dr - db);
            r = &(&r * &lb) - &(&b.mul_mono(&shift, &Q::one()) * &lr);
        }
        r
    }

    /// Gcd of the coefficients with respect to `v`.
    fn content_in(&self, v: &str) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v) {
            if !c.is_zero() {
                g = Poly::gcd(&g, &c);
                if g.is_one() {
                    break;
                }
            }
        }
        g
    }

    fn primitive_in(&self, v: &str) -> Poly {
        let c = self.content_in(v);
        if c.is_zero() {
            return self.clone();
        }
        self.div_exact(&c).expect("content divides")
    }

    /// Scale so that the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs vanish).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        let vars: BTreeSet<String> = a.vars().union(&b.vars()).cloned().collect();
        let v = vars.iter().next().expect("nonconstant").clone();
        let (da, db) = (a.deg_in(&v), b.deg_in(&v));
        if da == 0 {
            return Poly::gcd(a, &b.content_in(&v));
        }
        if db == 0 {
            return Poly::gcd(&a.content_in(&v), b);
        }
        let (ca, cb) = (a.content_in(&v), b.content_in(&v));
        let c = Poly::gcd(&ca, &cb);
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        let (mut f, mut g) = if da >= db { (pa, pb) } else { (pb, pa) };
        loop {
            let r = Poly::prem(&f, &g, &v);
            if r.is_zero() {
                break;
            }
            if r.deg_in(&v) == 0 {
                g = Poly::one();
                break;
            }
            f = g;
            g = r.primitive_in(&v);
        }
        (&c * &g.primitive_in(&v)).monic()
    }

    /// Lcm of coefficient denominators and gcd of coefficient numerators.
    pub fn integer_content(&self) -> (BigInt, BigInt) {
        let mut l = BigInt::one();
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
            g = g.gcd(c.numer());
        }
        (l, g)
    }

    /// Substitute rational values for some variables.
    pub fn eval_partial(&self, vals: &BTreeMap<String, Q>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for (n, e) in &m.0 {
                match vals.get(n) {
                    Some(x) => {
                        let mut p = Q::one();
                        for _ in 0..*e {
                            p *= x;
                        }
                        coef *= p;
                    }
                    None => rest.push((n.clone(), *e)),
                }
            }
            out.add_term(Mono(rest), coef);
        }
        out
    }

    /// Coefficient vector over the union of monomials in `polys`.
    pub fn coefficient_table(polys: &[&Poly]) -> (Vec<Mono>, Vec<Vec<Q>>) {
        let mons: BTreeSet<Mono> = polys.iter().flat_map(|p| p.terms.keys().cloned()).collect();
        let mons: Vec<Mono> = mons.into_iter().collect();
        let rows = polys
            .iter()
            .map(|p| {
                mons.iter()
                    .map(|m| p.terms.get(m).cloned().unwrap_or_else(Q::zero))
                    .collect()
            })
            .collect();
        (mons, rows)
    }

    pub(crate) fn neg_ref(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub(crate) fn is_negative_leading(&self) -> bool {
        self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false)
    }

    #[allow(dead_code)]
    pub(crate) fn reassemble(v: &str, cs: &[Poly]) -> Poly {
        Poly::from_coeffs_in(v, cs)
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_ref()
    }
}

fn fmt_mono(m: &Mono) -> String {
    m.0.iter()
        .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.sorted_terms() {
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", fmt_mono(m))?;
            } else if a.is_integer() {
                write!(f, "{a}{}", fmt_mono(m))?;
            } else {
                write!(f, "{a}*{}", fmt_mono(m))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Poly {
        Poly::var("k")
    }

    #[test]
    fn gcd_univariate() {
        // (k+1)(k+2) and (k+1)(k-3)
        let a = &(&k() + &Poly::from_int(1)) * &(&k() + &Poly::from_int(2));
        let b = &(&k() + &Poly::from_int(1)) * &(&k() - &Poly::from_int(3));
        assert_eq!(Poly::gcd(&a, &b), &k() + &Poly::from_int(1));
    }

    #[test]
    fn gcd_multivariate() {
        let x = Poly::var("x");
        let y = Poly::var("y");
        let common = &(&x * &y) + &Poly::from_int(1);
        let a = &common * &(&x + &y);
        let b = &common * &(&x - &y);
        assert_eq!(Poly::gcd(&a, &b), common);
        assert!(Poly::gcd(&(&x + &y), &(&x - &y)).is_one());
    }

    #[test]
    fn exact_division() {
        let x = Poly::var("x");
        let y = Poly::var("y");
        let a = &(&x + &y) * &(&x - &y);
        assert_eq!(a.div_exact(&(&x + &y)).unwrap(), &x - &y);
        assert!(x.div_exact(&y).is_none());
    }

    #[test]
    fn grlex_order() {
        let a = Mono::var("a");
        let b = Mono::var("b");
        assert_eq!(grlex(&a, &b), Ordering::Greater);
        assert_eq!(grlex(&a, &b.mul(&b)), Ordering::Less);
        assert_eq!(grlex(&a.mul(&b), &b.mul(&b)), Ordering::Greater);
    }

    #[test]
    fn display() {
        let p = &k().scale(&Q::from_integer((-1).into())) - &Poly::from_int(4);
        assert_eq!(p.to_string(), "-k-4");
        let q = &k().pow(2).scale(&Q::from_integer(2.into())) + &Poly::var("j");
        assert_eq!(q.to_string(), "2k^2+j");
    }
}
