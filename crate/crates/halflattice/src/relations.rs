//! Operator identities checked as exact matrix identities on a truncated
//! basis.

use cdo_core::error::Result;
use cdo_core::Q;
use num_traits::Zero;

use crate::engine::{Engine, Side};
use crate::spec::twist_intertwiner;
use crate::state::{Sector, State};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationReport {
    /// Number of `(relation, basis vector, modes)` instances compared.
    pub checked: usize,
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
}

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn pair(alpha: &[i64], x: &[Q]) -> Q {
    alpha.iter().zip(x).map(|(&a, b)| qi(a) * b).sum()
}

/// The five `A(α)` relations on every basis vector of degree at most `d`
/// in the given sectors, for modes `m, n` in `modes`.
pub fn check_a_alpha(
    e: &Engine,
    sectors: &[Sector],
    alpha: &[i64],
    xs: &[Vec<Q>],
    modes: (i64, i64),
    d: u32,
) -> Result<RelationReport> {
    let span = modes.0.abs().max(modes.1.abs()) as u32;
    let e = e.with_trunc(d + span);
    let mut rep = RelationReport::default();
    let h = e.kappa_inv_of(&alpha.iter().map(|&a| qi(a)).collect::<Vec<_>>());
    for b in e.basis_up_to(sectors, d) {
        let v = State::basis(b.clone());
        for n in modes.0..=modes.1 {
            let an_v = e.a_alpha(alpha, n, &v)?;
            for m in modes.0..=modes.1 {
                for x in xs {
                    for side in [Side::Left, Side::Right] {
                        let lhs = e
                            .heis(side, x, m, &an_v)
                            .sub(&e.a_alpha(alpha, n, &e.heis(side, x, m, &v))?);
                        let rhs = if m <= 0 {
                            let s = if side == Side::Left { pair(alpha, x) } else { -pair(alpha, x) };
                            e.a_alpha(alpha, m + n, &v)?.scale(&s)
                        } else {
                            State::zero()
                        };
                        rep.record(lhs.same_terms(&rhs), || format!("[π_{side:?}(x)_{m}, A_{n}] on {b:?}"));
                    }
                }
            }
            let lhs = an_v.scale(&qi(-n - 1));
            let mut rhs = State::zero();
            for i in 0..=b.degree() as i64 {
                rhs = rhs.add(&e.a_alpha(alpha, n - i, &e.heis_pair(&h, &h, i, &v))?);
            }
            rep.record(lhs.same_terms(&rhs), || format!("recursion at n = {n} on {b:?}"));
        }
    }
    Ok(rep)
}

/// `[π_L(x)_{(m)}, e^α_{(n)}] = α(x) e^α_{(m+n)}` and its right analogue,
/// compared below the truncation edge.
pub fn check_vertex(
    e: &Engine,
    sectors: &[Sector],
    alpha: &[i64],
    xs: &[Vec<Q>],
    modes: (i64, i64),
    d: u32,
) -> Result<RelationReport> {
    let span = modes.0.abs().max(modes.1.abs()) as u32;
    let big = e.with_trunc(d + 4 * span + 2);
    let window = d + span;
    let mut rep = RelationReport::default();
    for b in big.basis_up_to(sectors, d) {
        let v = State::basis(b.clone());
        for n in modes.0..=modes.1 {
            let en_v = big.vertex(alpha, n, &v)?;
            for m in modes.0..=modes.1 {
                for x in xs {
                    for side in [Side::Left, Side::Right] {
                        let lhs = big
                            .heis(side, x, m, &en_v)
                            .sub(&big.vertex(alpha, n, &big.heis(side, x, m, &v))?)
                            .project(window);
                        let s = if side == Side::Left { pair(alpha, x) } else { -pair(alpha, x) };
                        let rhs = big.vertex(alpha, m + n, &v)?.scale(&s).project(window);
                        rep.record(lhs.same_terms(&rhs), || format!("[π_{side:?}(x)_{m}, e_{n}] on {b:?}"));
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// `[x_{(m)}, E⁻(h, z)] = κ(x, h) z^m E⁻(h, z)` for `m ≥ 1` and `0` for `m ≤ 0`.
pub fn check_e_minus(e: &Engine, sectors: &[Sector], h: &[Q], xs: &[Vec<Q>], orders: u32, d: u32) -> RelationReport {
    let big = e.with_trunc(d + 2 * orders + 2);
    let zero = vec![Q::zero(); e.rank()];
    let mut rep = RelationReport::default();
    for b in big.basis_up_to(sectors, d) {
        let v = State::basis(b.clone());
        for j in 0..=orders {
            for m in -(orders as i64)..=orders as i64 {
                for x in xs {
                    let lhs = big
                        .heis(Side::Left, x, m, &big.e_minus(h, &zero, j, &v))
                        .sub(&big.e_minus(h, &zero, j, &big.heis(Side::Left, x, m, &v)));
                    let rhs = if m >= 1 && j as i64 >= m {
                        let k: Q = x.iter().enumerate().map(|(a, xa)| {
                            h.iter().enumerate().map(|(c, hc)| xa * hc * &big.kappa()[a][c]).sum::<Q>()
                        }).sum();
                        big.e_minus(h, &zero, j - m as u32, &v).scale(&k)
                    } else {
                        State::zero()
                    };
                    rep.record(lhs.same_terms(&rhs), || format!("[x_{m}, E^-_{j}] on {b:?}"));
                }
            }
        }
    }
    rep
}

/// The relabelling intertwiner carries the twisted Heisenberg action
/// `h_n - δ_{n,0} κ(γ, h)` to the untwisted one on the relabelled sector.
pub fn check_twist_intertwiner(e: &Engine, sectors: &[Sector], gamma: &[i64], xs: &[Vec<Q>], d: u32) -> RelationReport {
    let big = e.with_trunc(d + 3);
    let kg = big.kappa_of(&gamma.iter().map(|&g| qi(g)).collect::<Vec<_>>());
    let mut rep = RelationReport::default();
    for b in big.basis_up_to(sectors, d) {
        let v = State::basis(b.clone());
        for n in -3..=3 {
            for x in xs {
                for side in [Side::Left, Side::Right] {
                    let mut new = big.heis(side, x, n, &v);
                    if n == 0 && side == Side::Left {
                        let shift: Q = kg.iter().zip(x).map(|(a, b)| a * b).sum();
                        new = new.sub(&v.scale(&shift));
                    }
                    let lhs = twist_intertwiner(&big, gamma, &new);
                    let rhs = big.heis(side, x, n, &twist_intertwiner(&big, gamma, &v));
                    rep.record(lhs.same_terms(&rhs), || format!("intertwiner at n = {n} on {b:?}"));
                }
            }
        }
    }
    rep
}

/// `e^α_{(m)} v = 0` for `m ≥ m₀` and `≠ 0` at `m₀ - 1`; returns `m₀`.
pub fn vertex_vanishing_order(e: &Engine, alpha: &[i64], v: &State) -> Result<i64> {
    let mut m = 0i64;
    for b in v.terms.keys() {
        let c: i64 = e.z_power(&b.sector, alpha).to_integer().try_into().expect("small");
        m = m.max(b.degree() as i64 - c);
    }
    while m > -64 {
        if !e.vertex(alpha, m - 1, v)?.is_zero() {
            return Ok(m);
        }
        m -= 1;
    }
    Ok(m)
}
