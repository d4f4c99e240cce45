//! Infinite-descent search for an `h ⊕ h` weight vector.

use std::collections::BTreeMap;

use cdo_core::error::{Error, Result};
use cdo_core::linalg;
use cdo_core::rootdata::to_ints;
use cdo_core::Q;
use num_traits::Zero;

use crate::engine::{Engine, Side};
use crate::spec::sector_gamma;
use crate::state::{Basis, State};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentStep {
    pub alpha: Vec<i64>,
    /// Mode `k` of the offending Heisenberg action (0 in the second phase).
    pub k: i64,
    /// Mode `k'` of the applied `A(α)_{k'}`.
    pub mode: i64,
    pub d_before: usize,
    pub d_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentResult {
    pub vector: State,
    /// Weight `(λ + κ(γ',·), -λ)` of the result.
    pub lambda: Vec<i64>,
    pub gamma_prime: Vec<i64>,
    /// `-γ'`: the result generates `twist · D_T`.
    pub twist: Vec<i64>,
    pub steps: Vec<DescentStep>,
}

fn unit(r: usize, i: usize) -> Vec<i64> {
    let mut a = vec![0i64; r];
    a[i] = 1;
    a
}

fn unit_q(r: usize, i: usize) -> Vec<Q> {
    unit(r, i).into_iter().map(|x| Q::from_integer(x.into())).collect()
}

/// `dim span{(π_L(x) + π_R(x))_{(n)} v : x ∈ h, n > 0}`.
pub fn d_of(e: &Engine, v: &State) -> usize {
    let vecs = positive_images(e, v);
    let mut index: BTreeMap<Basis, usize> = BTreeMap::new();
    for s in &vecs {
        for b in s.terms.keys() {
            let n = index.len();
            index.entry(b.clone()).or_insert(n);
        }
    }
    if index.is_empty() {
        return 0;
    }
    let m: Vec<Vec<Q>> = vecs
        .iter()
        .map(|s| {
            let mut row = vec![Q::zero(); index.len()];
            for (b, c) in &s.terms {
                row[index[b]] = c.clone();
            }
            row
        })
        .collect();
    linalg::rank(&m)
}

fn positive_images(e: &Engine, v: &State) -> Vec<State> {
    let r = e.rank();
    let top = v.max_degree() as i64;
    let mut out = Vec::new();
    for n in 1..=top {
        for i in 0..r {
            let x = unit_q(r, i);
            out.push(e.heis_pair(&x, &x, n, v));
        }
    }
    out
}

fn is_eigen(e: &Engine, side: Side, h: &[Q], v: &State) -> bool {
    let w = e.heis(side, h, 0, v);
    let Some((b, c)) = v.terms.iter().next() else {
        return true;
    };
    let ev = w.terms.get(b).cloned().unwrap_or_else(Q::zero) / c;
    w.same_terms(&v.scale(&ev))
}

/// Largest `n` with `A(α)_n v ≠ 0`, together with that vector.
fn top_a_mode(e: &Engine, alpha: &[i64], v: &State) -> Result<(i64, State)> {
    let mut hi = i64::MIN;
    let mut lo = i64::MAX;
    for b in v.terms.keys() {
        let c: i64 = e.z_power(&b.sector, alpha).to_integer().try_into().expect("small");
        hi = hi.max(b.degree() as i64 - 1 - c);
        lo = lo.min(-1 - c);
    }
    let mut n = hi;
    while n >= lo {
        let w = e.a_alpha(alpha, n, v)?;
        if !w.is_zero() {
            return Ok((n, w));
        }
        n -= 1;
    }
    Err(Error::pre("simple vertex algebra", "A(α)(z) v vanished identically"))
}

/// Two-phase descent: shrink `d(v)` with `A(α)_{k'}` until `v` is killed by
/// all positive modes, then make it a simultaneous `h ⊕ h` eigenvector.
pub fn descent_weight_vector(e: &Engine, v: &State) -> Result<DescentResult> {
    if v.is_zero() {
        return Err(Error::pre("nonzero input", "descent needs a nonzero vector"));
    }
    if v.max_degree() > e.trunc() {
        return Err(Error::pre("truncation", format!("input has degree {} above the truncation {}; raise D", v.max_degree(), e.trunc())));
    }
    let r = e.rank();
    for n in 1..=v.max_degree() as i64 {
        for i in 0..r {
            if !e.heis(Side::Right, &unit_q(r, i), n, v).is_zero() {
                return Err(Error::pre("right invariants", "v is not annihilated by the right positive modes"));
            }
        }
    }
    for b in v.terms.keys() {
        sector_gamma(e, &b.sector)?;
    }
    let mut v = v.clone();
    let mut steps = Vec::new();
    loop {
        let d = d_of(e, &v);
        if d == 0 {
            break;
        }
        let top = v.max_degree() as i64;
        let (k, alpha) = (1..=top)
            .rev()
            .find_map(|k| {
                (0..r).find_map(|i| {
                    let h = e.kappa_inv_of(&unit_q(r, i));
                    (!e.heis_pair(&h, &h, k, &v).is_zero()).then(|| (k, unit(r, i)))
                })
            })
            .expect("d(v) > 0");
        let (mode, w) = top_a_mode(e, &alpha, &v)?;
        let d2 = d_of(e, &w);
        if d2 >= d {
            return Err(Error::pre("descent", format!("d did not decrease ({d} -> {d2})")));
        }
        steps.push(DescentStep { alpha, k, mode, d_before: d, d_after: d2 });
        v = w;
    }
    // Keep one right weight.
    let right = v.terms.keys().next().expect("nonzero").sector.right.clone();
    v.terms.retain(|b, _| b.sector.right == right);
    for i in 0..r {
        let h = e.kappa_inv_of(&unit_q(r, i));
        if is_eigen(e, Side::Left, &h, &v) {
            continue;
        }
        let alpha = unit(r, i);
        let (mode, w) = top_a_mode(e, &alpha, &v)?;
        steps.push(DescentStep { alpha, k: 0, mode, d_before: 0, d_after: 0 });
        v = w;
    }
    let sector = v.terms.keys().next().expect("nonzero").sector.clone();
    if v.terms.keys().any(|b| b.sector != sector) {
        return Err(Error::pre("descent", "result is not a weight vector"));
    }
    let lambda = to_ints(&sector.right.iter().map(|x| -x).collect::<Vec<_>>())
        .ok_or_else(|| Error::pre("character lattice", "right weight is not a character"))?;
    let gamma_prime = sector_gamma(e, &sector)?;
    Ok(DescentResult { twist: gamma_prime.iter().map(|x| -x).collect(), vector: v, lambda, gamma_prime, steps })
}
