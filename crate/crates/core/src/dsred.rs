//! Drinfeld–Sokolov reduction as a calculus on labels and characters.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::charring::{ghost_char, weyl_module_char, GradedCharacter};
use crate::error::{Error, Result};
use crate::levels::Level;
use crate::poly::Q;
use crate::rootdata::{fmt_vec, is_integral, qadd, qdot, qneg, qscale, Coweight, RootDatum};
use crate::spectralflow::ModuleLabel;

/// Terms of the BRST differential for the principal nilpotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrstData {
    /// Positive roots (simple-root coefficients) in height order.
    pub positive_roots: Vec<Vec<i64>>,
    /// One quadratic term `e_α φ*_α` per positive root (indices).
    pub quadratic: Vec<usize>,
    /// Cubic terms `c^{αβ}_γ φ*_α φ*_β φ_γ` for `α < β`, `α + β = γ`.
    pub cubic: Vec<(usize, usize, usize, i64)>,
    /// `χ(e_α) φ*_α` terms with nonzero coefficient.
    pub chi: Vec<(usize, i64)>,
}

impl BrstData {
    /// Value of the character `χ` on `e_α`.
    pub fn chi_value(&self, root: usize) -> i64 {
        self.chi.iter().find(|(i, _)| *i == root).map(|(_, v)| *v).unwrap_or(0)
    }

    pub fn structure_constant(&self, a: usize, b: usize) -> Option<i64> {
        self.cubic.iter().find_map(|&(x, y, _, c)| {
            if (x, y) == (a, b) {
                Some(c)
            } else if (x, y) == (b, a) {
                Some(-c)
            } else {
                None
            }
        })
    }
}

/// Chevalley structure constants from the Frenkel–Kac sign cocycle, rescaled
/// to be positive on extraspecial pairs. Simply-laced data only.
pub fn brst_data(d: &RootDatum) -> Result<BrstData> {
    if d.is_torus() {
        return Err(Error::pre("semisimple datum", "a torus has no BRST data"));
    }
    if !d.is_simply_laced() {
        return Err(Error::pre("simply laced", "structure constants are implemented for simply-laced types"));
    }
    let a = d.cartan();
    let p = d.semisimple_rank();
    let eps = |x: &[i64], y: &[i64]| -> i64 {
        let mut s = 1i64;
        for i in 0..p {
            for j in 0..p {
                let neg = i == j || (i < j && a[i][j] == -1);
                if neg && (x[i] * y[j]).rem_euclid(2) == 1 {
                    s = -s;
                }
            }
        }
        s
    };
    let pos = d.positive_roots().to_vec();
    let index = |v: &[i64]| pos.iter().position(|r| r == v);
    let mut sign = vec![1i64; pos.len()];
    for g in 0..pos.len() {
        if pos[g].iter().sum::<i64>() == 1 {
            continue;
        }
        let (ai, bi) = (0..pos.len())
            .find_map(|ai| {
                let rest: Vec<i64> = pos[g].iter().zip(&pos[ai]).map(|(x, y)| x - y).collect();
                index(&rest).map(|bi| (ai, bi))
            })
            .expect("non-simple root decomposes");
        sign[g] = sign[ai] * sign[bi] * eps(&pos[ai], &pos[bi]);
    }
    let mut cubic = Vec::new();
    for x in 0..pos.len() {
        for y in x + 1..pos.len() {
            let sum: Vec<i64> = pos[x].iter().zip(&pos[y]).map(|(u, v)| u + v).collect();
            if let Some(g) = index(&sum) {
                let c = sign[x] * sign[y] * eps(&pos[x], &pos[y]) * sign[g];
                cubic.push((x, y, g, c));
            }
        }
    }
    let chi = (0..pos.len())
        .filter(|&i| pos[i].iter().sum::<i64>() == 1)
        .map(|i| (i, 1))
        .collect();
    Ok(BrstData {
        quadratic: (0..pos.len()).collect(),
        positive_roots: pos,
        cubic,
        chi,
    })
}

/// Fermionic twist `n_α = -α(μ̌)` attached to a coweight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhostTwist {
    pub coweight: Coweight,
    pub fermions: Vec<i64>,
}

impl GhostTwist {
    pub fn charge_shift(&self) -> i64 {
        self.fermions.iter().sum()
    }
}

pub fn c_twist(d: &RootDatum, mu: &[Q]) -> Result<GhostTwist> {
    if !d.in_coweight_lattice(mu) {
        return Err(Error::pre("coweight lattice", format!("{} is not a coweight", fmt_vec(mu))));
    }
    let fermions = d
        .positive_root_vectors()
        .iter()
        .map(|a| -qdot(a, mu).to_integer().try_into().unwrap_or(0i64))
        .collect();
    Ok(GhostTwist { coweight: mu.to_vec(), fermions })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub degree: Option<i64>,
    pub payload: ModuleLabel,
    pub simple: Option<bool>,
}

impl ReductionResult {
    pub fn zero() -> Self {
        ReductionResult { degree: None, payload: ModuleLabel::Zero, simple: None }
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "degree": self.degree,
            "payload": self.payload.to_string(),
            "simple": self.simple,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("json")
    }

    pub fn from_json(d: &RootDatum, text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::parse(text, 0, e.to_string()))?;
        let payload = v["payload"].as_str().ok_or_else(|| Error::parse(text, 0, "payload"))?;
        Ok(ReductionResult {
            degree: v["degree"].as_i64(),
            payload: ModuleLabel::parse(d, payload)?,
            simple: v["simple"].as_bool(),
        })
    }
}

fn require_generic(kappa: &Level) -> Result<()> {
    if kappa.is_generic() {
        Ok(())
    } else {
        Err(Error::pre("generic level", "reduction rules hold at generic level"))
    }
}

fn two_rho(d: &RootDatum, mu: &[Q]) -> i64 {
    let v = qdot(&qscale(&Q::from_integer(2.into()), &d.rho()), mu);
    v.to_integer().try_into().expect("integral on coweights")
}

pub fn reduce_weyl(d: &RootDatum, lambda: &[Q], kappa: &Level) -> Result<ReductionResult> {
    require_generic(kappa)?;
    if !d.is_dominant(lambda) || !is_integral(lambda) {
        return Err(Error::pre("dominant integral", format!("{} is not dominant in X*(T)", fmt_vec(lambda))));
    }
    Ok(ReductionResult {
        degree: Some(0),
        payload: ModuleLabel::Tw { level: kappa.clone(), weight: lambda.to_vec(), coweight: vec![Q::zero(); d.rank()] },
        simple: Some(true),
    })
}

/// Reduction of `μ̌ · V^κ_λ`: zero off the dominant cone, else
/// `T^κ_{λ,μ̌}` in degree `2ρ(μ̌)`.
pub fn reduce_sf_weyl(d: &RootDatum, lambda: &[Q], mu: &[Q], kappa: &Level) -> Result<ReductionResult> {
    require_generic(kappa)?;
    if !d.in_coweight_lattice(mu) {
        return Err(Error::pre("coweight lattice", format!("{} is not a coweight", fmt_vec(mu))));
    }
    if !d.is_dominant(lambda) || !is_integral(lambda) {
        return Err(Error::pre("dominant integral", format!("{} is not dominant in X*(T)", fmt_vec(lambda))));
    }
    if !d.is_dominant_coweight(mu) {
        return Ok(ReductionResult::zero());
    }
    Ok(ReductionResult {
        degree: Some(two_rho(d, mu)),
        payload: ModuleLabel::Tw { level: kappa.clone(), weight: lambda.to_vec(), coweight: mu.to_vec() },
        simple: Some(true),
    })
}

/// Reduction of `(γ, x) · D^κ` as a Peter–Weyl family.
pub fn reduce_cdo_sf(d: &RootDatum, gamma: &[Q], x: &[Q], kappa: &Level) -> Result<ReductionResult> {
    require_generic(kappa)?;
    if !is_integral(gamma) {
        return Err(Error::pre("cocharacter lattice", format!("{} is not in X_*(T)", fmt_vec(gamma))));
    }
    if !d.in_coweight_lattice(x) {
        return Err(Error::pre("coweight lattice", format!("{} is not a coweight", fmt_vec(x))));
    }
    let mu = qadd(gamma, x);
    if !d.is_dominant_coweight(&mu) {
        return Ok(ReductionResult::zero());
    }
    let untwisted = x.iter().all(Zero::is_zero) && d.is_dominant_coweight(gamma);
    Ok(ReductionResult {
        degree: Some(two_rho(d, &mu)),
        payload: ModuleLabel::PwSum { level: kappa.clone(), coweight: mu, twist: d.w0_coweight(x) },
        simple: Some(untwisted || d.is_adjoint()),
    })
}

/// Euler character of the reduction of `V^κ_λ` after the principal
/// specialization `e^μ ↦ q^{-⟨μ,ρ̌⟩}`, through `q^N` above the lowest term.
pub fn euler_char_reduction(d: &RootDatum, lambda: &[Q], kappa: &Level, n: i64) -> Result<GradedCharacter> {
    require_generic(kappa)?;
    if d.is_torus() {
        return weyl_module_char(d, lambda, kappa, n);
    }
    let a = euler_at(d, lambda, kappa, n)?;
    let b = euler_at(d, lambda, kappa, n + 1)?;
    let cut = |c: &GradedCharacter| -> BTreeMap<_, i64> {
        c.terms().filter(|(k, _)| k.q <= n).map(|(k, m)| (k.clone(), *m)).collect()
    };
    if a.offset != b.offset || cut(&a) != cut(&b) {
        return Err(Error::pre("non-convergent specialization", "truncations disagree"));
    }
    let mut out = GradedCharacter::zero(d.rank(), d.rank(), n);
    out.offset = a.offset.clone();
    for (k, m) in cut(&a) {
        out.add_term(k, m);
    }
    Ok(out)
}

fn euler_at(d: &RootDatum, lambda: &[Q], kappa: &Level, n: i64) -> Result<GradedCharacter> {
    let w = weyl_module_char(d, lambda, kappa, n)?;
    let g = ghost_char(d, n).specialize(None, None, Some(-1), Some(crate::scalar::Scalar::zero()))?;
    let prod = w.mul(&g)?;
    let c = qneg(&d.rho_check());
    prod.specialize(Some(&c), None, None, None)
}

/// Coefficients `(charge, q) ↦ mult` of `Π_{n≥1}(1+y q^{n-1})(1+y⁻¹ qⁿ)`.
pub fn fermion_side(n: i64) -> BTreeMap<(i64, i64), i64> {
    let mut c: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    c.insert((0, 0), 1);
    let mul = |c: &BTreeMap<(i64, i64), i64>, ch: i64, qp: i64| {
        let mut r = c.clone();
        for (&(a, b), &m) in c {
            if b + qp <= n {
                *r.entry((a + ch, b + qp)).or_insert(0) += m;
            }
        }
        r.retain(|_, m| *m != 0);
        r
    };
    for k in 1..=n + 1 {
        c = mul(&c, 1, k - 1);
        c = mul(&c, -1, k);
    }
    c
}

/// Coefficients of `Σ_m y^m q^{m(m-1)/2} Π_{n≥1}(1-qⁿ)^{-1}`.
pub fn boson_side(n: i64) -> BTreeMap<(i64, i64), i64> {
    let mut part = vec![0i64; (n + 1) as usize];
    part[0] = 1;
    for k in 1..=n as usize {
        for j in k..=n as usize {
            part[j] += part[j - k];
        }
    }
    let mut c = BTreeMap::new();
    let mut m: i64 = -(n + 2);
    while m <= n + 2 {
        let low = m * (m - 1) / 2;
        if low <= n {
            for j in 0..=(n - low) {
                c.insert((m, low + j), part[j as usize]);
            }
        }
        m += 1;
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfReport {
    pub ok: bool,
    /// `(root index, charge, q, fermion side, boson side)`.
    pub mismatch: Option<(usize, i64, i64, i64, i64)>,
}

/// Boson–fermion identity per positive root through `q^N`.
pub fn boson_fermion_check(d: &RootDatum, n: i64) -> BfReport {
    for r in 0..d.positive_roots().len().max(1) {
        let f = fermion_side(n);
        let b = boson_side(n);
        let keys: std::collections::BTreeSet<_> = f.keys().chain(b.keys()).copied().collect();
        for k in keys {
            let (x, y) = (f.get(&k).copied().unwrap_or(0), b.get(&k).copied().unwrap_or(0));
            if x != y {
                return BfReport { ok: false, mismatch: Some((r, k.0, k.1, x, y)) };
            }
        }
    }
    BfReport { ok: true, mismatch: None }
}

/// Lowest q-power of charge `m` on the fermion side.
pub fn lowest_power_of_charge(n: i64, m: i64) -> Option<i64> {
    fermion_side(n).keys().filter(|(c, _)| *c == m).map(|(_, qq)| *qq).min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::qvec;

    #[test]
    fn sl3_brst() {
        let d = RootDatum::preset("SL(3)").unwrap();
        let b = brst_data(&d).unwrap();
        assert_eq!(b.quadratic.len(), 3);
        assert_eq!(b.cubic.len(), 1);
        assert_eq!(b.cubic[0].3, 1);
        assert_eq!(b.chi.len(), 2);
        assert_eq!(b.chi_value(2), 0);
    }

    #[test]
    fn psl2_zero_and_degree() {
        let d = RootDatum::preset("PSL2").unwrap();
        let k = Level::generic(&d);
        let z = reduce_cdo_sf(&d, &qvec(&[-1]), &qvec(&[0]), &k).unwrap();
        assert_eq!(z.to_json(), r#"{"degree":null,"payload":"Zero","simple":null}"#);
        let r = reduce_cdo_sf(&d, &qvec(&[2]), &qvec(&[0]), &k).unwrap();
        assert_eq!(r.degree, Some(2));
        assert_eq!(r.simple, Some(true));
    }

    #[test]
    fn sl2_euler() {
        let d = RootDatum::preset("SL2").unwrap();
        let k = Level::generic(&d);
        let e = euler_char_reduction(&d, &qvec(&[2]), &k, 6).unwrap();
        assert_eq!(e.offset.to_string(), "(-k)/(k+2)");
        let got: Vec<i64> = (0..=6).map(|q| e.graded_dimension(q)).collect();
        assert_eq!(got, vec![1, 1, 2, 2, 4, 5, 8]);
    }

    #[test]
    fn bf_identity() {
        let d = RootDatum::preset("SL2").unwrap();
        assert!(boson_fermion_check(&d, 12).ok);
        for m in -2..=3 {
            assert_eq!(lowest_power_of_charge(12, m), Some(m * (m - 1) / 2));
        }
    }
}
