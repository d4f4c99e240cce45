use std::collections::BTreeMap;
use std::fmt;

use cdo_core::rootdata::fmt_vec;
use cdo_core::Q;
use num_traits::Zero;

/// Highest weights `(λ_L, λ_R)` of a Fock sector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sector {
    pub left: Vec<Q>,
    pub right: Vec<Q>,
}

impl Sector {
    pub fn new(left: Vec<Q>, right: Vec<Q>) -> Self {
        Sector { left, right }
    }

    pub fn vacuum(rank: usize) -> Self {
        Sector { left: vec![Q::zero(); rank], right: vec![Q::zero(); rank] }
    }

    /// `(λ_L + α, λ_R - α)`.
    pub fn shift(&self, alpha: &[i64]) -> Self {
        Sector {
            left: self.left.iter().zip(alpha).map(|(x, &a)| x + Q::from_integer(a.into())).collect(),
            right: self.right.iter().zip(alpha).map(|(x, &a)| x - Q::from_integer(a.into())).collect(),
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}, {}>", fmt_vec(&self.left), fmt_vec(&self.right))
    }
}

/// Oscillator monomial: sorted `(direction, p)` with `p ≥ 1` standing for
/// the mode `-p`. Repeated entries are powers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono(pub Vec<(usize, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|e| e.1).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn with(&self, dir: usize, p: u32) -> Self {
        let mut v = self.0.clone();
        let at = v.partition_point(|e| *e <= (dir, p));
        v.insert(at, (dir, p));
        Mono(v)
    }

    pub fn without(&self, idx: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(idx);
        Mono(v)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|(d, p)| format!("h{}(-{})", d, p)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Basis {
    pub sector: Sector,
    pub left: Mono,
    pub right: Mono,
}

impl Basis {
    pub fn vacuum(sector: Sector) -> Self {
        Basis { sector, left: Mono::one(), right: Mono::one() }
    }

    pub fn degree(&self) -> u32 {
        self.left.degree() + self.right.degree()
    }
}

/// Finite linear combination of basis states. `truncated` records that
/// some term above the truncation degree was dropped while producing it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct State {
    pub terms: BTreeMap<Basis, Q>,
    pub truncated: bool,
}

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn basis(b: Basis) -> Self {
        let mut s = State::zero();
        s.add_term(b, Q::from_integer(1.into()));
        s
    }

    pub fn vacuum(sector: Sector) -> Self {
        State::basis(Basis::vacuum(sector))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, b: Basis, c: Q) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.get(&b).cloned().unwrap_or_else(Q::zero) + c;
        if v.is_zero() {
            self.terms.remove(&b);
        } else {
            self.terms.insert(b, v);
        }
    }

    pub fn add(&self, o: &State) -> State {
        let mut r = self.clone();
        for (b, c) in &o.terms {
            r.add_term(b.clone(), c.clone());
        }
        r.truncated |= o.truncated;
        r
    }

    pub fn scale(&self, c: &Q) -> State {
        let mut r = State { terms: BTreeMap::new(), truncated: self.truncated };
        for (b, x) in &self.terms {
            r.add_term(b.clone(), x * c);
        }
        r
    }

    pub fn sub(&self, o: &State) -> State {
        self.add(&o.scale(&Q::from_integer((-1).into())))
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(Basis::degree).max().unwrap_or(0)
    }

    /// Terms of degree at most `d`.
    pub fn project(&self, d: u32) -> State {
        State {
            terms: self.terms.iter().filter(|(b, _)| b.degree() <= d).map(|(b, c)| (b.clone(), c.clone())).collect(),
            truncated: false,
        }
    }

    pub fn sectors(&self) -> Vec<Sector> {
        let mut v: Vec<Sector> = self.terms.keys().map(|b| b.sector.clone()).collect();
        v.dedup();
        v
    }

    pub fn same_terms(&self, o: &State) -> bool {
        self.terms == o.terms
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c} * [{}] ({}) {}", b.left, b.right, b.sector)?;
        }
        Ok(())
    }
}
