//! Heisenberg, lattice vertex and `A(α)` operators on truncated Fock sums.

use cdo_core::error::{Error, Result};
use cdo_core::linalg;
use cdo_core::Q;
use num_traits::{One, Zero};

use crate::state::{Basis, Mono, Sector, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum L0Side {
    Left,
    Right,
    Total,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operator {
    HeisL(Vec<Q>, i64),
    HeisR(Vec<Q>, i64),
    /// Mode `e^α_{(n)}`.
    Vertex(Vec<i64>, i64),
    /// Coefficient of `z^order` in `E⁻((h, h'), z)`.
    EMinus(Vec<Q>, Vec<Q>, u32),
    /// Mode `A(α)_n`.
    AAlpha(Vec<i64>, i64),
    SugawaraL0(L0Side),
}

/// Level `κ` on the left Heisenberg and `-κ` on the right one, with
/// oscillators truncated at total degree `trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Engine {
    rank: usize,
    kappa: Vec<Vec<Q>>,
    kinv: Vec<Vec<Q>>,
    trunc: u32,
}

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

impl Engine {
    pub fn new(kappa: Vec<Vec<Q>>, trunc: u32) -> Result<Self> {
        let rank = kappa.len();
        if kappa.iter().any(|r| r.len() != rank) {
            return Err(Error::pre("level shape", "κ must be square"));
        }
        for i in 0..rank {
            for j in 0..i {
                if kappa[i][j] != kappa[j][i] {
                    return Err(Error::pre("level symmetry", "κ must be symmetric"));
                }
            }
        }
        let kinv = linalg::inverse(&kappa).ok_or_else(|| Error::pre("nondegenerate level", "κ is not invertible"))?;
        Ok(Engine { rank, kappa, kinv, trunc })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kappa(&self) -> &[Vec<Q>] {
        &self.kappa
    }

    pub fn kappa_inv(&self) -> &[Vec<Q>] {
        &self.kinv
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn with_trunc(&self, trunc: u32) -> Self {
        Engine { trunc, ..self.clone() }
    }

    /// `κ(x, ·)` as a weight.
    pub fn kappa_of(&self, x: &[Q]) -> Vec<Q> {
        linalg::mat_vec(&self.kappa, x)
    }

    /// `κ⁻¹ α` as a Cartan element.
    pub fn kappa_inv_of(&self, alpha: &[Q]) -> Vec<Q> {
        linalg::mat_vec(&self.kinv, alpha)
    }

    fn form(&self, side: Side, i: usize, j: usize) -> Q {
        match side {
            Side::Left => self.kappa[i][j].clone(),
            Side::Right => -self.kappa[i][j].clone(),
        }
    }

    pub fn apply(&self, op: &Operator, v: &State) -> Result<State> {
        Ok(match op {
            Operator::HeisL(h, n) => self.heis(Side::Left, h, *n, v),
            Operator::HeisR(h, n) => self.heis(Side::Right, h, *n, v),
            Operator::Vertex(a, n) => self.vertex(a, *n, v)?,
            Operator::EMinus(h, h2, k) => self.e_minus(h, h2, *k, v),
            Operator::AAlpha(a, n) => self.a_alpha(a, *n, v)?,
            Operator::SugawaraL0(s) => self.sugawara_l0(*s, v),
        })
    }

    /// `π_side(h)_{(n)}`.
    pub fn heis(&self, side: Side, h: &[Q], n: i64, v: &State) -> State {
        let mut out = State { truncated: v.truncated, ..State::zero() };
        for (b, c) in &v.terms {
            let mono = match side {
                Side::Left => &b.left,
                Side::Right => &b.right,
            };
            if n < 0 {
                let p = (-n) as u32;
                if b.degree() + p > self.trunc {
                    out.truncated = true;
                    continue;
                }
                for (i, hi) in h.iter().enumerate() {
                    if hi.is_zero() {
                        continue;
                    }
                    let m = mono.with(i, p);
                    let nb = match side {
                        Side::Left => Basis { left: m, ..b.clone() },
                        Side::Right => Basis { right: m, ..b.clone() },
                    };
                    out.add_term(nb, c * hi);
                }
            } else if n == 0 {
                let w = match side {
                    Side::Left => &b.sector.left,
                    Side::Right => &b.sector.right,
                };
                let e: Q = w.iter().zip(h).map(|(x, y)| x * y).sum();
                out.add_term(b.clone(), c * e);
            } else {
                let p = n as u32;
                for (idx, &(dir, q)) in mono.0.iter().enumerate() {
                    if q != p {
                        continue;
                    }
                    let pair: Q = h.iter().enumerate().map(|(i, hi)| hi * self.form(side, i, dir)).sum();
                    if pair.is_zero() {
                        continue;
                    }
                    let m = mono.without(idx);
                    let nb = match side {
                        Side::Left => Basis { left: m, ..b.clone() },
                        Side::Right => Basis { right: m, ..b.clone() },
                    };
                    out.add_term(nb, c * &pair * qi(n));
                }
            }
        }
        out
    }

    /// `π_L(h)_{(n)} + π_R(h')_{(n)}`.
    pub fn heis_pair(&self, h: &[Q], h2: &[Q], n: i64, v: &State) -> State {
        self.heis(Side::Left, h, n, v).add(&self.heis(Side::Right, h2, n, v))
    }

    /// Coefficients `P_0 v, ..., P_jmax v` of `exp(-Σ_{k>0} H_k z^{-k}/k) v`
    /// with `H = π_L(h) + π_R(h)`.
    fn annihilation_series(&self, h: &[Q], v: &State, jmax: u32) -> Vec<State> {
        let mut ps = vec![v.clone()];
        for j in 1..=jmax {
            let mut acc = State::zero();
            for k in 1..=j {
                acc = acc.add(&self.heis_pair(h, h, k as i64, &ps[(j - k) as usize]));
            }
            ps.push(acc.scale(&(-Q::one() / qi(j as i64))));
        }
        ps
    }

    /// Coefficients of `exp(Σ_{k>0} (π_L(h)+π_R(h'))_{-k} z^k/k) v` up to `z^jmax`.
    fn creation_series(&self, h: &[Q], h2: &[Q], v: &State, jmax: u32) -> Vec<State> {
        let mut qs = vec![v.clone()];
        for j in 1..=jmax {
            let mut acc = State::zero();
            for k in 1..=j {
                acc = acc.add(&self.heis_pair(h, h2, -(k as i64), &qs[(j - k) as usize]));
            }
            qs.push(acc.scale(&(Q::one() / qi(j as i64))));
        }
        qs
    }

    /// Coefficient of `z^order` in `E⁻((h, h'), z) = exp(Σ_{n<0} (π_L(h)+π_R(h'))_{(n)} z^{-n}/(-n))`.
    pub fn e_minus(&self, h: &[Q], h2: &[Q], order: u32, v: &State) -> State {
        self.creation_series(h, h2, v, order).pop().expect("nonempty")
    }

    /// Zero-mode exponent `(λ_L + λ_R)(κ⁻¹α)` on a sector.
    pub fn z_power(&self, sector: &Sector, alpha: &[i64]) -> Q {
        let a: Vec<Q> = alpha.iter().map(|&x| qi(x)).collect();
        let h = self.kappa_inv_of(&a);
        sector.left.iter().zip(&sector.right).zip(&h).map(|((l, r), x)| (l + r) * x).sum()
    }

    fn integral_power(&self, sector: &Sector, alpha: &[i64]) -> Result<i64> {
        let c = self.z_power(sector, alpha);
        if !c.is_integer() {
            return Err(Error::pre(
                "admissible sector",
                format!("{sector} has non-integral z-power {c} for the vertex operator"),
            ));
        }
        Ok(c.to_integer().try_into().expect("small"))
    }

    fn shift_sector(&self, v: &State, alpha: &[i64]) -> State {
        let mut out = State { truncated: v.truncated, ..State::zero() };
        for (b, c) in &v.terms {
            out.add_term(Basis { sector: b.sector.shift(alpha), ..b.clone() }, c.clone());
        }
        out
    }

    fn check_alpha(&self, alpha: &[i64]) -> Result<()> {
        if alpha.len() != self.rank {
            return Err(Error::pre("character lattice", format!("α must have {} coordinates", self.rank)));
        }
        Ok(())
    }

    /// `A(α)_n v = e^α P_{n+1+c} v` with `c` the zero-mode exponent.
    pub fn a_alpha(&self, alpha: &[i64], n: i64, v: &State) -> Result<State> {
        self.check_alpha(alpha)?;
        let h = self.kappa_inv_of(&alpha.iter().map(|&x| qi(x)).collect::<Vec<_>>());
        let mut out = State { truncated: v.truncated, ..State::zero() };
        for (b, c) in &v.terms {
            let p = self.integral_power(&b.sector, alpha)?;
            let j = n + 1 + p;
            if j < 0 || j > b.degree() as i64 {
                continue;
            }
            let one = State::basis(b.clone()).scale(c);
            let ps = self.annihilation_series(&h, &one, j as u32);
            out = out.add(&self.shift_sector(&ps[j as usize], alpha));
        }
        Ok(out)
    }

    /// `e^α_{(n)} v = Σ_i Q_i e^α P_{i+c+n+1} v`.
    pub fn vertex(&self, alpha: &[i64], n: i64, v: &State) -> Result<State> {
        self.check_alpha(alpha)?;
        let h = self.kappa_inv_of(&alpha.iter().map(|&x| qi(x)).collect::<Vec<_>>());
        let mut out = State { truncated: v.truncated, ..State::zero() };
        for (b, c) in &v.terms {
            let p = self.integral_power(&b.sector, alpha)?;
            let one = State::basis(b.clone()).scale(c);
            let deg = b.degree() as i64;
            let ps = self.annihilation_series(&h, &one, deg as u32);
            for (j, pj) in ps.iter().enumerate() {
                let i = j as i64 - p - n - 1;
                if i < 0 || pj.is_zero() {
                    continue;
                }
                let base = self.shift_sector(pj, alpha);
                let qs = self.creation_series(&h, &h, &base, i as u32);
                out = out.add(&qs[i as usize]);
            }
        }
        Ok(out)
    }

    /// Oscillator degree plus `±(λ, κ⁻¹λ)/2` per side.
    pub fn sugawara_l0(&self, side: L0Side, v: &State) -> State {
        let mut out = State { truncated: v.truncated, ..State::zero() };
        for (b, c) in &v.terms {
            let e = self.l0_eigenvalue(side, b);
            out.add_term(b.clone(), c * e);
        }
        out
    }

    pub fn l0_eigenvalue(&self, side: L0Side, b: &Basis) -> Q {
        let half = Q::new(1.into(), 2.into());
        let off = |w: &[Q]| -> Q {
            let kw = self.kappa_inv_of(w);
            w.iter().zip(&kw).map(|(x, y)| x * y).sum::<Q>() * &half
        };
        let left = qi(b.left.degree() as i64) + off(&b.sector.left);
        let right = qi(b.right.degree() as i64) - off(&b.sector.right);
        match side {
            L0Side::Left => left,
            L0Side::Right => right,
            L0Side::Total => left + right,
        }
    }

    /// All basis states of the given sectors with total degree at most `d`.
    pub fn basis_up_to(&self, sectors: &[Sector], d: u32) -> Vec<Basis> {
        let parts = monomials(self.rank, d);
        let mut out = Vec::new();
        for s in sectors {
            for l in &parts {
                for r in &parts {
                    if l.degree() + r.degree() <= d {
                        out.push(Basis { sector: s.clone(), left: l.clone(), right: r.clone() });
                    }
                }
            }
        }
        out
    }
}

/// Monomials in `rank` oscillator directions of degree at most `d`.
pub fn monomials(rank: usize, d: u32) -> Vec<Mono> {
    let mut parts: Vec<(usize, u32)> = Vec::new();
    for p in 1..=d {
        for i in 0..rank {
            parts.push((i, p));
        }
    }
    parts.sort();
    let mut out = Vec::new();
    fn rec(parts: &[(usize, u32)], start: usize, budget: u32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<Mono>) {
        out.push(Mono(cur.clone()));
        for k in start..parts.len() {
            if parts[k].1 <= budget {
                cur.push(parts[k]);
                rec(parts, k, budget - parts[k].1, cur, out);
                cur.pop();
            }
        }
    }
    rec(&parts, 0, d, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        qi(n)
    }

    fn rank1() -> Engine {
        Engine::new(vec![vec![q(1)]], 6).unwrap()
    }

    #[test]
    fn monomial_count() {
        // Partitions of 0..=4 summed: 1 + 1 + 2 + 3 + 5.
        assert_eq!(monomials(1, 4).len(), 12);
    }

    #[test]
    fn heisenberg_basics() {
        let e = rank1();
        let vac = State::vacuum(Sector::new(vec![q(2)], vec![q(-2)]));
        assert!(e.heis(Side::Left, &[q(1)], 1, &vac).is_zero());
        assert_eq!(e.heis(Side::Left, &[q(1)], 0, &vac), vac.scale(&q(2)));
        let v = e.heis(Side::Left, &[q(1)], -1, &vac);
        let w = e.heis(Side::Left, &[q(1)], 1, &v);
        assert_eq!(w, vac);
        let v = e.heis(Side::Right, &[q(1)], -2, &vac);
        assert_eq!(e.heis(Side::Right, &[q(1)], 2, &v), vac.scale(&q(-2)));
    }

    #[test]
    fn vertex_on_vacuum() {
        let e = rank1();
        let vac = State::vacuum(Sector::vacuum(1));
        assert!(e.vertex(&[1], 0, &vac).unwrap().is_zero());
        let v = e.vertex(&[1], -1, &vac).unwrap();
        assert_eq!(v, State::vacuum(Sector::new(vec![q(1)], vec![q(-1)])));
    }

    #[test]
    fn l0_values() {
        let e = Engine::new(vec![vec![Q::new(3.into(), 2.into())]], 4).unwrap();
        let s = Sector::new(vec![q(5)], vec![q(-5)]);
        assert!(e.l0_eigenvalue(L0Side::Total, &Basis::vacuum(s)).is_zero());
        let v = e.heis(Side::Left, &[q(1)], -1, &State::vacuum(Sector::vacuum(1)));
        assert_eq!(e.sugawara_l0(L0Side::Total, &v), v);
    }
}
