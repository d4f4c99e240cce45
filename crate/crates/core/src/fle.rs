//! Object-level tables for the fundamental local equivalence and its
//! degenerations.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::dsred::{reduce_cdo_sf, ReductionResult};
use crate::error::{Error, Result};
use crate::lattice::{hnf_basis, rational_kernel_integral};
use crate::levels::{casimir_offset, shifted_level, Level};
use crate::poly::{Poly, Q};
use crate::rootdata::{fmt_vec, qadd, to_ints, Coweight, RootDatum, Weight};
use crate::scalar::Scalar;
use crate::spectralflow::ModuleLabel;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FleRow {
    pub gamma: Coweight,
    pub source: ReductionResult,
    /// Highest weight of the dual-group irreducible; equals `γ`.
    pub target: Weight,
    pub dim: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FleTable {
    pub datum: String,
    pub dual: String,
    pub conjectural: bool,
    pub rows: Vec<FleRow>,
}

fn covered(d: &RootDatum) -> bool {
    d.is_torus()
        || (d.is_simple()
            && d.is_adjoint()
            && matches!(d.component_types()[0].series, 'A' | 'D'))
}

/// One row per dominant cocharacter `γ` of height at most `cutoff` in the
/// dual datum.
pub fn fle_table(d: &RootDatum, kappa: &Level, cutoff: i64) -> Result<FleTable> {
    if !kappa.is_generic() {
        return Err(Error::pre("generic level", "the table is defined at generic level"));
    }
    let dual = d.dual();
    let zero = vec![Q::zero(); d.rank()];
    let rows = dual
        .dominant_weights(cutoff)
        .into_iter()
        .map(|g| {
            let mut source = reduce_cdo_sf(d, &g, &zero, kappa)?;
            if g.iter().all(Zero::is_zero) {
                source.payload = ModuleLabel::EqW { level: kappa.clone(), shift: 0 };
            }
            Ok(FleRow { dim: dual.weyl_dimension(&g)?, target: g.clone(), gamma: g, source })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FleTable {
        datum: d.name().to_string(),
        dual: dual.name().to_string(),
        conjectural: !covered(d),
        rows,
    })
}

impl FleTable {
    pub fn to_json_value(&self) -> Value {
        json!({
            "datum": self.datum,
            "dual": self.dual,
            "conjectural": self.conjectural,
            "rows": self.rows.iter().map(|r| json!({
                "gamma": r.gamma.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "source": r.source.to_json_value(),
                "target": r.target.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "dim": r.dim,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn render(&self) -> String {
        let mut out = format!("FLE {} -> {}{}\n", self.datum, self.dual, if self.conjectural { " (conjectural)" } else { "" });
        let cells: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    fmt_vec(&r.gamma),
                    r.source.degree.map(|x| x.to_string()).unwrap_or_else(|| "-".into()),
                    r.source.payload.to_string(),
                    format!("V{} dim {}", fmt_vec(&r.target), r.dim),
                ]
            })
            .collect();
        let w0 = cells.iter().map(|c| c[0].len()).max().unwrap_or(0).max(5);
        let w1 = cells.iter().map(|c| c[1].len()).max().unwrap_or(0).max(3);
        out.push_str(&format!("{:<w0$}  {:>w1$}  source => target\n", "gamma", "deg"));
        for c in cells {
            out.push_str(&format!("{:<w0$}  {:>w1$}  {} => {}\n", c[0], c[1], c[2], c[3]));
        }
        out
    }
}

/// `Y = X_*(T) ∩ κ⁻¹(X*(T))` for a torus, as an HNF basis.
pub fn torus_y(d: &RootDatum, kappa: &Level) -> Result<Vec<Vec<i64>>> {
    if !d.is_torus() {
        return Err(Error::pre("torus", format!("{} is not a torus", d.name())));
    }
    let r = d.rank();
    let k = &kappa.abelian;
    if k.len() != r || !kappa.abelian_nondegenerate() {
        return Err(Error::pre("nondegenerate level", "κ must be a nondegenerate form on the torus"));
    }
    // Unknowns (γ, c) with K γ - c = 0 identically in the level parameters.
    let mut eqs: Vec<Vec<Q>> = Vec::new();
    for i in 0..r {
        let den = k[i].iter().fold(Poly::one(), |acc, x| lcm_poly(&acc, x.denom()));
        let mut polys: Vec<Poly> = k[i]
            .iter()
            .map(|x| {
                let f = den.div_exact(x.denom()).expect("divides");
                x.numer() * &f
            })
            .collect();
        for j in 0..r {
            polys.push(if i == j { den.neg_ref() } else { Poly::zero() });
        }
        let refs: Vec<&Poly> = polys.iter().collect();
        let (_, table) = Poly::coefficient_table(&refs);
        let nm = table.first().map(|c| c.len()).unwrap_or(0);
        for m in 0..nm {
            eqs.push(table.iter().map(|col| col[m].clone()).collect());
        }
    }
    let pts = rational_kernel_integral(&eqs, 2 * r);
    let proj: Vec<Vec<i64>> = pts.iter().map(|v| v[..r].to_vec()).filter(|v| v.iter().any(|&x| x != 0)).collect();
    Ok(hnf_basis(&proj, r))
}

fn lcm_poly(a: &Poly, b: &Poly) -> Poly {
    let g = Poly::gcd(a, b);
    (a * b).div_exact(&g).expect("gcd divides").monic()
}

/// The dual torus with character lattice `Y`.
pub fn dual_torus(d: &RootDatum, kappa: &Level) -> Result<(RootDatum, Vec<Vec<i64>>)> {
    let y = torus_y(d, kappa)?;
    Ok((RootDatum::torus(y.len()), y))
}

/// Pairs of dominant weights whose conformal offsets at `κ` and `κ*`
/// sum to an integer.
pub fn satake_integrality(d: &RootDatum, kappa: &Level, cutoff: i64) -> Result<Vec<(Weight, Weight)>> {
    if !d.is_simple() {
        return Err(Error::pre("simple datum", format!("{} is not simple", d.name())));
    }
    if kappa.simple.iter().any(Scalar::is_constant) {
        return Err(Error::pre("symbolic level", "the obstruction is decided with an indeterminate level"));
    }
    let dual = kappa.dual(d);
    let ws = d.dominant_p_weights(cutoff);
    let a: Vec<Scalar> = ws.iter().map(|l| casimir_offset(d, l, kappa)).collect::<Result<_>>()?;
    let b: Vec<Scalar> = ws.iter().map(|m| casimir_offset(d, m, &dual)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (i, l) in ws.iter().enumerate() {
        for (j, m) in ws.iter().enumerate() {
            if (&a[i] + &b[j]).is_integer() {
                out.push((l.clone(), m.clone()));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedRow {
    pub mu: Weight,
    pub lambda: Weight,
    pub in_root_lattice: bool,
    pub label: ModuleLabel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedTable {
    /// The level `k[1] - 1`.
    pub level: Scalar,
    pub rows: Vec<ShiftedRow>,
}

/// Simple objects `V^{k[1]-1}_μ ⊗ L_1(λ(μ))` of the shifted equivariant
/// W-algebra, for adjoint types A and D.
pub fn shifted_w_simples(d: &RootDatum, k: &Scalar, cutoff: i64) -> Result<ShiftedTable> {
    if !(d.is_simple() && d.is_adjoint() && matches!(d.component_types()[0].series, 'A' | 'D')) {
        return Err(Error::pre("adjoint type A or D", format!("{} is not supported", d.name())));
    }
    let level = shifted_level(k, 1, d.dual_coxeter(0)?)? - Scalar::one();
    let lv = Level::uniform(d, &level);
    let rows = d
        .dominant_p_weights(cutoff)
        .into_iter()
        .map(|mu| {
            let lambda = d.minuscule_match(&mu)?;
            Ok(ShiftedRow {
                in_root_lattice: d.in_root_lattice(&qadd(&mu, &lambda)),
                label: ModuleLabel::Tensor(vec![
                    ModuleLabel::Weyl { level: lv.clone(), weight: mu.clone() },
                    ModuleLabel::L1 { weight: lambda.clone() },
                ]),
                mu,
                lambda,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ShiftedTable { level, rows })
}

impl ShiftedTable {
    pub fn to_json_value(&self, d: &RootDatum) -> Value {
        let fc = |w: &[Q]| to_ints(&d.fundamental_coords(w)).expect("integral");
        json!({
            "level": self.level.to_string(),
            "rows": self.rows.iter().map(|r| json!({
                "mu": fc(&r.mu),
                "lambda": fc(&r.lambda),
                "in_root_lattice": r.in_root_lattice,
                "label": r.label.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::qvec;

    fn rank1(k: Scalar) -> (RootDatum, Level) {
        let d = RootDatum::torus(1);
        let l = Level::new(&d, vec![vec![k]], vec![]).unwrap();
        (d, l)
    }

    #[test]
    fn y_lattice() {
        let (d, l) = rank1(Scalar::from_ratio(3, 2));
        assert_eq!(torus_y(&d, &l).unwrap(), vec![vec![2]]);
        let (d, l) = rank1(Scalar::one());
        assert_eq!(torus_y(&d, &l).unwrap(), vec![vec![1]]);
        let (d, l) = rank1(Scalar::var("k"));
        assert!(torus_y(&d, &l).unwrap().is_empty());
    }

    #[test]
    fn psl2_table() {
        let d = RootDatum::preset("PSL2").unwrap();
        let t = fle_table(&d, &Level::generic(&d), 4).unwrap();
        assert!(!t.conjectural);
        let dims: Vec<u64> = t.rows.iter().map(|r| r.dim).collect();
        assert_eq!(dims, (1..=9).collect::<Vec<u64>>());
        assert_eq!(t.rows[0].source.payload, ModuleLabel::EqW { level: Level::generic(&d), shift: 0 });
    }

    #[test]
    fn sl2_shifted_level() {
        let d = RootDatum::preset("PSL2").unwrap();
        let t = shifted_w_simples(&d, &Scalar::var("k"), 3).unwrap();
        assert_eq!(t.level.to_string(), "(-2k-1)/(k+1)");
        let w = d.fundamental_weight(0);
        let row = t.rows.iter().find(|r| r.mu == w).unwrap();
        assert_eq!(row.lambda, w);
        assert!(t.rows.iter().all(|r| r.in_root_lattice));
    }

    #[test]
    fn sl2_satake() {
        let d = RootDatum::preset("SL2").unwrap();
        let pairs = satake_integrality(&d, &Level::generic(&d), 4).unwrap();
        assert!(pairs.iter().all(|(a, b)| a == b));
        assert!(pairs.contains(&(qvec(&[0]), qvec(&[0]))));
    }
}
