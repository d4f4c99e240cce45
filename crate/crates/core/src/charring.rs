//! Graded formal characters with a conformal offset, integer q-powers,
//! a fermionic charge and left/right weight gradings.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::levels::{abelian_offset, casimir_offset, Level};
use crate::linalg;
use crate::poly::Q;
use crate::rootdata::{fmt_vec, qadd, qdot, qneg, qsub, RootDatum, Weight};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub q: i64,
    pub charge: i64,
    pub left: Vec<Q>,
    pub right: Vec<Q>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Truncated character `q^offset Σ mult · y^charge e^left e^right q^q`.
///
/// Terms with `q > trunc` are not stored; every stored coefficient is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCharacter {
    pub offset: Scalar,
    pub trunc: i64,
    pub virtual_char: bool,
    nl: usize,
    nr: usize,
    terms: BTreeMap<Key, i64>,
}

impl GradedCharacter {
    pub fn zero(nl: usize, nr: usize, trunc: i64) -> Self {
        GradedCharacter {
            offset: Scalar::zero(),
            trunc,
            virtual_char: false,
            nl,
            nr,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(nl: usize, nr: usize, trunc: i64) -> Self {
        let mut c = Self::zero(nl, nr, trunc);
        c.add_term(
            Key {
                q: 0,
                charge: 0,
                left: vec![Q::zero(); nl],
                right: vec![Q::zero(); nr],
            },
            1,
        );
        c
    }

    pub fn monomial(key: Key, mult: i64, trunc: i64) -> Self {
        let mut c = Self::zero(key.left.len(), key.right.len(), trunc);
        c.add_term(key, mult);
        c
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nl, self.nr)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &i64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, k: &Key) -> i64 {
        self.terms.get(k).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, k: Key, m: i64) {
        if m == 0 || k.q > self.trunc {
            return;
        }
        if m < 0 {
            self.virtual_char = true;
        }
        let v = self.terms.get(&k).copied().unwrap_or(0) + m;
        if v == 0 {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, v);
        }
    }

    fn check_dims(&self, o: &Self) -> Result<()> {
        if self.dims() != o.dims() {
            return Err(Error::pre("character shape", "weight dimensions differ"));
        }
        Ok(())
    }

    /// Integer `n` with `o.offset = self.offset + n`.
    fn offset_gap(&self, o: &Self) -> Result<i64> {
        (&o.offset - &self.offset)
            .as_i64()
            .ok_or_else(|| Error::pre("offset mismatch", format!("{} and {} differ by a non-integer", self.offset, o.offset)))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_dims(o)?;
        if self.is_zero() {
            return Ok(GradedCharacter { trunc: o.trunc.min(self.trunc), ..o.clone() });
        }
        if o.is_zero() {
            return Ok(GradedCharacter { trunc: o.trunc.min(self.trunc), ..self.clone() });
        }
        let gap = self.offset_gap(o)?;
        let (base, other, shift) = if gap >= 0 { (self, o, gap) } else { (o, self, -gap) };
        let mut r = GradedCharacter {
            trunc: base.trunc.min(other.trunc + shift),
            ..base.clone()
        };
        r.terms.retain(|k, _| k.q <= r.trunc);
        r.virtual_char |= other.virtual_char;
        for (k, m) in &other.terms {
            let mut k2 = k.clone();
            k2.q += shift;
            r.add_term(k2, *m);
        }
        Ok(r)
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Self>, nl: usize, nr: usize, trunc: i64) -> Result<Self> {
        items
            .into_iter()
            .try_fold(Self::zero(nl, nr, trunc), |acc, c| acc.add(c))
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut r = Self::zero(self.nl, self.nr, self.trunc);
        r.offset = self.offset.clone();
        r.virtual_char = self.virtual_char || c < 0;
        for (k, m) in &self.terms {
            r.add_term(k.clone(), m * c);
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_dims(o)?;
        let trunc = self.trunc.min(o.trunc);
        let mut acc: HashMap<Key, i64> = HashMap::new();
        for (a, ma) in &self.terms {
            for (b, mb) in &o.terms {
                let qq = a.q + b.q;
                if qq > trunc {
                    continue;
                }
                let k = Key {
                    q: qq,
                    charge: a.charge + b.charge,
                    left: qadd(&a.left, &b.left),
                    right: qadd(&a.right, &b.right),
                };
                *acc.entry(k).or_insert(0) += ma * mb;
            }
        }
        let mut r = Self::zero(self.nl, self.nr, trunc);
        r.offset = &self.offset + &o.offset;
        r.virtual_char = self.virtual_char || o.virtual_char;
        r.terms = acc.into_iter().filter(|(_, m)| *m != 0).collect();
        Ok(r)
    }

    /// Multiply by `1/(1 - e^w q^n)` for `n ≥ 1`.
    pub fn mul_geometric(&mut self, side: Side, w: &[Q], n: i64) {
        assert!(n >= 1);
        let mut layers: BTreeMap<i64, HashMap<(i64, Vec<Q>, Vec<Q>), i64>> = BTreeMap::new();
        for (k, m) in std::mem::take(&mut self.terms) {
            layers.entry(k.q).or_default().insert((k.charge, k.left, k.right), m);
        }
        for qq in n..=self.trunc {
            let Some(prev) = layers.get(&(qq - n)).cloned() else { continue };
            let cur = layers.entry(qq).or_default();
            for ((c, l, r), m) in prev {
                let (l2, r2) = match side {
                    Side::Left => (qadd(&l, w), r),
                    Side::Right => (l, qadd(&r, w)),
                };
                *cur.entry((c, l2, r2)).or_insert(0) += m;
            }
        }
        for (qq, layer) in layers {
            for ((c, l, r), m) in layer {
                if m != 0 {
                    self.terms.insert(Key { q: qq, charge: c, left: l, right: r }, m);
                }
            }
        }
    }

    /// Multiply by `(1 + s·y^charge e^w q^n)` on the left weights.
    pub fn mul_binomial(&self, w: &[Q], charge: i64, n: i64, s: i64) -> Self {
        let mut r = self.clone();
        for (k, m) in &self.terms {
            let k2 = Key {
                q: k.q + n,
                charge: k.charge + charge,
                left: qadd(&k.left, w),
                right: k.right.clone(),
            };
            r.add_term(k2, m * s);
        }
        r
    }

    /// Move the left grading to the right (the left becomes zero of length
    /// `nl_new`).
    pub fn to_right(&self, nl_new: usize) -> Self {
        let mut r = Self::zero(nl_new, self.nl, self.trunc);
        r.offset = self.offset.clone();
        r.virtual_char = self.virtual_char;
        for (k, m) in &self.terms {
            r.add_term(
                Key {
                    q: k.q,
                    charge: k.charge,
                    left: vec![Q::zero(); nl_new],
                    right: k.left.clone(),
                },
                *m,
            );
        }
        r
    }

    /// Terms with the given q-power, as a character with trunc 0.
    pub fn extract_coefficient(&self, qexp: i64) -> Self {
        let mut r = Self::zero(self.nl, self.nr, 0);
        r.offset = &self.offset + &Scalar::from_int(qexp);
        r.virtual_char = self.virtual_char;
        for (k, m) in &self.terms {
            if k.q == qexp {
                r.add_term(Key { q: 0, ..k.clone() }, *m);
            }
        }
        r
    }

    /// Sum of multiplicities at a q-power (weights and charge forgotten).
    pub fn graded_dimension(&self, qexp: i64) -> i64 {
        self.terms.iter().filter(|(k, _)| k.q == qexp).map(|(_, m)| m).sum()
    }

    /// Same terms, ignoring offset and truncation.
    pub fn same_terms(&self, o: &Self) -> bool {
        self.terms == o.terms
    }

    /// Substitute `e^μ ↦ q^{⟨μ, c⟩}` on the given sides and `y ↦ s`.
    ///
    /// The new offset is `declared` if given (all exponents must then be
    /// nonnegative) and otherwise the lowest resulting exponent. The result
    /// keeps every produced term; completeness of high q-powers is the
    /// caller's concern, since the substitution mixes q with weights.
    pub fn specialize(
        &self,
        left: Option<&[Q]>,
        right: Option<&[Q]>,
        y: Option<i64>,
        declared: Option<Scalar>,
    ) -> Result<Self> {
        if let Some(s) = y {
            if s.abs() != 1 {
                return Err(Error::pre("substitution", format!("y must map to ±1, got {s}")));
            }
        }
        let mut raw: BTreeMap<(Q, i64, Vec<Q>, Vec<Q>), i64> = BTreeMap::new();
        for (k, m) in &self.terms {
            let mut e = Q::from_integer(k.q.into());
            let mut l = k.left.clone();
            let mut r = k.right.clone();
            if let Some(c) = left {
                e += qdot(&k.left, c);
                l = vec![Q::zero(); self.nl];
            }
            if let Some(c) = right {
                e += qdot(&k.right, c);
                r = vec![Q::zero(); self.nr];
            }
            let (charge, mult) = match y {
                Some(s) if k.charge.rem_euclid(2) == 1 => (0, m * s),
                Some(_) => (0, *m),
                None => (k.charge, *m),
            };
            *raw.entry((e, charge, l, r)).or_insert(0) += mult;
        }
        raw.retain(|_, m| *m != 0);
        let mut out = Self::zero(self.nl, self.nr, 0);
        out.virtual_char = self.virtual_char || y == Some(-1);
        let Some(min) = raw.keys().map(|k| k.0.clone()).min() else {
            out.offset = declared.unwrap_or_else(|| self.offset.clone());
            out.trunc = self.trunc;
            return Ok(out);
        };
        let base = match &declared {
            Some(d) => {
                let gap = d - &self.offset;
                let g = gap
                    .as_rational()
                    .ok_or_else(|| Error::pre("substitution", "declared offset differs symbolically"))?;
                if min < g {
                    return Err(Error::pre(
                        "substitution",
                        format!("exponent {} lies below the declared offset", min),
                    ));
                }
                g
            }
            None => min.clone(),
        };
        out.offset = &self.offset + &Scalar::from_q(base.clone());
        out.trunc = if left.is_none() && right.is_none() {
            let b: i64 = base.to_integer().try_into().expect("small exponent");
            self.trunc - b
        } else {
            let top = raw.keys().map(|k| k.0.clone()).max().expect("nonempty") - &base;
            top.ceil().to_integer().try_into().expect("small exponent")
        };
        for ((e, c, l, r), m) in raw {
            let d = e - &base;
            if !d.is_integer() {
                return Err(Error::pre("substitution", "exponents do not share a fractional part"));
            }
            let qq: i64 = d.to_integer().try_into().expect("small exponent");
            out.add_term(Key { q: qq, charge: c, left: l, right: r }, m);
        }
        Ok(out)
    }

    pub fn to_json_value(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, m)| {
                json!({
                    "q": k.q,
                    "charge": k.charge,
                    "left": k.left.iter().map(q_json).collect::<Vec<_>>(),
                    "right": k.right.iter().map(q_json).collect::<Vec<_>>(),
                    "mult": m,
                })
            })
            .collect();
        json!({
            "offset": self.offset.to_string(),
            "trunc": self.trunc,
            "terms": terms,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::parse(text, 0, e.to_string()))?;
        let bad = |m: &str| Error::parse(text, 0, m.to_string());
        let offset = Scalar::parse(v["offset"].as_str().ok_or_else(|| bad("offset"))?)?;
        let trunc = v["trunc"].as_i64().ok_or_else(|| bad("trunc"))?;
        let terms = v["terms"].as_array().ok_or_else(|| bad("terms"))?;
        let vecq = |x: &Value| -> Result<Vec<Q>> {
            x.as_array()
                .ok_or_else(|| bad("weight"))?
                .iter()
                .map(|e| match e {
                    Value::Number(n) => n.as_i64().map(|i| Q::from_integer(i.into())).ok_or_else(|| bad("weight")),
                    Value::String(s) => s.parse::<Q>().map_err(|_| bad("weight")),
                    _ => Err(bad("weight")),
                })
                .collect()
        };
        let mut nl = 0;
        let mut nr = 0;
        let mut parsed = Vec::new();
        for t in terms {
            let left = vecq(&t["left"])?;
            let right = vecq(&t["right"])?;
            nl = left.len();
            nr = right.len();
            parsed.push((
                Key {
                    q: t["q"].as_i64().ok_or_else(|| bad("q"))?,
                    charge: t["charge"].as_i64().ok_or_else(|| bad("charge"))?,
                    left,
                    right,
                },
                t["mult"].as_i64().ok_or_else(|| bad("mult"))?,
            ));
        }
        let mut c = Self::zero(nl, nr, trunc);
        c.offset = offset;
        for (k, m) in parsed {
            c.add_term(k, m);
        }
        Ok(c)
    }
}

fn q_json(x: &Q) -> Value {
    if x.is_integer() {
        json!(i64::try_from(x.to_integer()).expect("small weight"))
    } else {
        json!(x.to_string())
    }
}

/// Weight multiplicities of the irreducible of highest weight `λ`
/// (Freudenthal's formula).
pub fn weight_multiplicities(d: &RootDatum, lambda: &[Q]) -> Result<BTreeMap<Weight, i64>> {
    if !d.is_dominant(lambda) || !d.in_weight_lattice(lambda) {
        return Err(Error::pre("dominant integral", format!("{} is not dominant integral", fmt_vec(lambda))));
    }
    let p = d.semisimple_rank();
    let hl = d.height(lambda);
    let max_depth: i64 = hl.floor().to_integer().try_into().expect("small");
    let mut dominant: Vec<(i64, Weight)> = Vec::new();
    let mut cur = vec![0i64; p];
    fn rec(d: &RootDatum, lambda: &[Q], i: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<(i64, Weight)>) {
        if i == cur.len() {
            let mu = qsub(lambda, &d.root_vector(cur));
            if d.is_dominant(&mu) {
                out.push((cur.iter().sum(), mu));
            }
            return;
        }
        for c in 0..=budget {
            cur[i] = c;
            rec(d, lambda, i + 1, budget - c, cur, out);
        }
        cur[i] = 0;
    }
    rec(d, lambda, 0, max_depth, &mut cur, &mut dominant);
    dominant.sort();
    let rho = d.rho();
    let lr = qadd(lambda, &rho);
    let norm_l = d.form(&lr, &lr);
    let pos = d.positive_root_vectors();
    let mut mult: BTreeMap<Weight, i64> = BTreeMap::new();
    mult.insert(lambda.to_vec(), 1);
    for (depth, mu) in dominant.iter() {
        if *depth == 0 {
            continue;
        }
        let mr = qadd(mu, &rho);
        let denom = &norm_l - d.form(&mr, &mr);
        let mut num = Q::zero();
        for a in &pos {
            let mut nu = qadd(mu, a);
            while d.height(&nu) <= hl {
                let m = mult.get(&d.to_dominant(&nu)).copied().unwrap_or(0);
                if m != 0 {
                    num += Q::from_integer(m.into()) * d.form(&nu, a);
                }
                nu = qadd(&nu, a);
            }
        }
        let m = Q::from_integer(2.into()) * num / denom;
        assert!(m.is_integer() && !m.is_negative(), "Freudenthal produced {m}");
        let m: i64 = m.to_integer().try_into().expect("small");
        if m > 0 {
            mult.insert(mu.clone(), m);
        }
    }
    let mut full = BTreeMap::new();
    for (mu, m) in mult {
        for w in d.weyl_orbit(&mu) {
            full.insert(w, m);
        }
    }
    Ok(full)
}

fn zeros(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

/// Character of the finite irreducible `V_λ`, graded on the left.
pub fn finite_char(d: &RootDatum, lambda: &[Q]) -> Result<GradedCharacter> {
    let n = d.rank();
    let mut c = GradedCharacter::zero(n, n, 0);
    for (w, m) in weight_multiplicities(d, lambda)? {
        c.add_term(Key { q: 0, charge: 0, left: w, right: zeros(n) }, m);
    }
    Ok(c)
}

/// Character of the Weyl module `V^κ_λ` through `q^N`.
pub fn weyl_module_char(d: &RootDatum, lambda: &[Q], kappa: &Level, trunc: i64) -> Result<GradedCharacter> {
    let offset = casimir_offset(d, lambda, kappa)?;
    let mut c = finite_char(d, lambda)?;
    c.trunc = trunc;
    c.offset = offset;
    let adj = d.adjoint_weights();
    for nn in 1..=trunc {
        for b in &adj {
            c.mul_geometric(Side::Left, b, nn);
        }
    }
    Ok(c)
}

/// Fock module of the Heisenberg algebra on `h` with weight `λ`.
pub fn fock_char(d: &RootDatum, lambda: &[Q], kappa: &Level, trunc: i64) -> Result<GradedCharacter> {
    let n = d.rank();
    let full: Vec<Vec<Scalar>> = (0..n)
        .map(|i| kappa.apply(d, &crate::rootdata::qvec(&(0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>())))
        .collect();
    let offset = if lambda.iter().all(Zero::is_zero) {
        Scalar::zero()
    } else {
        let inv = linalg::inverse(&full).ok_or_else(|| Error::pre("degenerate level", "κ is not invertible on h"))?;
        let l: Vec<Scalar> = lambda.iter().cloned().map(Scalar::from_q).collect();
        let v = linalg::mat_vec(&inv, &l);
        linalg::dot(&l, &v).checked_div(&Scalar::from_int(2)).expect("2")
    };
    let mut c = GradedCharacter::zero(n, n, trunc);
    c.add_term(Key { q: 0, charge: 0, left: lambda.to_vec(), right: zeros(n) }, 1);
    c.offset = offset;
    for nn in 1..=trunc {
        for _ in 0..n {
            c.mul_geometric(Side::Left, &zeros(n), nn);
        }
    }
    Ok(c)
}

/// `Σ_{λ} V_λ ⊗ V_{-w0 λ}` over dominant `λ` within the cutoff.
pub fn og_char(d: &RootDatum, cutoff: i64) -> Result<GradedCharacter> {
    let n = d.rank();
    let mut total = GradedCharacter::zero(n, n, 0);
    for lam in d.dominant_weights(cutoff) {
        let l = finite_char(d, &lam)?;
        let r = finite_char(d, &d.minus_w0(&lam))?.to_right(n);
        total = total.add(&l.mul(&r)?)?;
    }
    Ok(total)
}

/// Peter–Weyl side of the CDO character at a generic level.
pub fn cdo_char(d: &RootDatum, kappa: &Level, trunc: i64, cutoff: i64) -> Result<GradedCharacter> {
    if !kappa.is_generic() {
        return Err(Error::pre("generic level", "cdo_char needs a generic level"));
    }
    let n = d.rank();
    let dual = kappa.dual(d);
    let parts: Vec<Result<GradedCharacter>> = d
        .dominant_weights(cutoff)
        .par_iter()
        .map(|lam| {
            let l = weyl_module_char(d, lam, kappa, trunc)?;
            let r = weyl_module_char(d, &d.minus_w0(lam), &dual, trunc)?.to_right(n);
            l.mul(&r)
        })
        .collect();
    let mut total = GradedCharacter::zero(n, n, trunc);
    for p in parts {
        total = total.add(&p?)?;
    }
    Ok(total)
}

/// Ghost character `Π_{α>0} Π_{n≥1}(1+y⁻¹e^{α}qⁿ) Π_{n≥0}(1+y e^{-α}qⁿ)`.
pub fn ghost_char(d: &RootDatum, trunc: i64) -> GradedCharacter {
    let n = d.rank();
    let mut c = GradedCharacter::unit(n, n, trunc);
    for a in d.positive_root_vectors() {
        let na = qneg(&a);
        for k in 0..=trunc {
            if k >= 1 {
                c = c.mul_binomial(&a, -1, k, 1);
            }
            c = c.mul_binomial(&na, 1, k, 1);
        }
    }
    c
}

/// Abelian piece of a Fock offset; re-exported for the torus engine.
pub fn fock_offset(d: &RootDatum, lambda: &[Q], kappa: &Level) -> Result<Scalar> {
    abelian_offset(d, lambda, kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::qvec;

    #[test]
    fn sl2_finite() {
        let d = RootDatum::preset("SL2").unwrap();
        let c = finite_char(&d, &qvec(&[2])).unwrap();
        assert_eq!(c.num_terms(), 3);
        assert_eq!(c.graded_dimension(0), 3);
    }

    #[test]
    fn sl3_adjoint() {
        let d = RootDatum::preset("SL(3)").unwrap();
        let m = weight_multiplicities(&d, &qvec(&[1, 1])).unwrap();
        assert_eq!(m.len(), 7);
        assert_eq!(m[&qvec(&[0, 0])], 2);
    }

    #[test]
    fn ghost_layers() {
        let d = RootDatum::preset("SL2").unwrap();
        let g = ghost_char(&d, 3);
        assert_eq!(g.graded_dimension(0), 2);
        let c0q1: i64 = g.terms().filter(|(k, _)| k.q == 1 && k.charge == 0).map(|(_, m)| m).sum();
        assert_eq!(c0q1, 1);
    }

    #[test]
    fn specialize_half() {
        let d = RootDatum::preset("SL2").unwrap();
        let c = finite_char(&d, &qvec(&[1])).unwrap();
        let s = c.specialize(Some(&[Q::new((-1).into(), 2.into())]), None, None, None).unwrap();
        assert_eq!(s.offset.to_string(), "-1/2");
        assert_eq!(s.graded_dimension(0), 1);
        assert_eq!(s.graded_dimension(1), 1);
    }

    #[test]
    fn json_round_trip() {
        let d = RootDatum::preset("SL2").unwrap();
        let c = weyl_module_char(&d, &qvec(&[1]), &Level::generic(&d), 2).unwrap();
        let back = GradedCharacter::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }
}
