//! Levels: invariant forms given by one scalar per simple factor and a
//! symmetric block on the center.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Field};
use crate::poly::Q;
use crate::rootdata::{qvec, RootDatum};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Level {
    pub abelian: Vec<Vec<Scalar>>,
    pub simple: Vec<Scalar>,
}

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

impl Level {
    pub fn new(d: &RootDatum, abelian: Vec<Vec<Scalar>>, simple: Vec<Scalar>) -> Result<Self> {
        let z = d.center_rank();
        if abelian.len() != z || abelian.iter().any(|r| r.len() != z) {
            return Err(Error::pre("level shape", format!("abelian block must be {z}x{z}")));
        }
        if simple.len() != d.components().len() {
            return Err(Error::pre(
                "level shape",
                format!("expected {} simple levels, got {}", d.components().len(), simple.len()),
            ));
        }
        for i in 0..z {
            for j in 0..i {
                if abelian[i][j] != abelian[j][i] {
                    return Err(Error::pre("level symmetry", "abelian block is not symmetric"));
                }
            }
        }
        Ok(Level { abelian, simple })
    }

    /// `k` on every simple factor and `k·I` on the center.
    pub fn uniform(d: &RootDatum, k: &Scalar) -> Self {
        let z = d.center_rank();
        let abelian = (0..z)
            .map(|i| (0..z).map(|j| if i == j { k.clone() } else { Scalar::zero() }).collect())
            .collect();
        Level {
            abelian,
            simple: vec![k.clone(); d.components().len()],
        }
    }

    /// Independent indeterminates: `k` (or `k1, k2, ...`) on the simple
    /// factors and `t·I` on the center (`k·I` for a torus).
    pub fn generic(d: &RootDatum) -> Self {
        let ns = d.components().len();
        let simple: Vec<Scalar> = if ns == 1 {
            vec![Scalar::var("k")]
        } else {
            (1..=ns).map(|i| Scalar::var(&format!("k{i}"))).collect()
        };
        let z = d.center_rank();
        let t = Scalar::var(if ns == 0 { "k" } else { "t" });
        let abelian = (0..z)
            .map(|i| (0..z).map(|j| if i == j { t.clone() } else { Scalar::zero() }).collect())
            .collect();
        Level { abelian, simple }
    }

    /// Negate the abelian block and send `k_s ↦ -k_s - 2ȟ_s`.
    pub fn dual(&self, d: &RootDatum) -> Self {
        Level {
            abelian: self.abelian.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
            simple: self
                .simple
                .iter()
                .enumerate()
                .map(|(i, k)| -k - s(2 * d.dual_coxeter(i).expect("factor")))
                .collect(),
        }
    }

    pub fn critical(d: &RootDatum) -> Self {
        let z = d.center_rank();
        Level {
            abelian: vec![vec![Scalar::zero(); z]; z],
            simple: (0..d.components().len())
                .map(|i| s(-d.dual_coxeter(i).expect("factor")))
                .collect(),
        }
    }

    pub fn is_critical_somewhere(&self, d: &RootDatum) -> bool {
        self.simple
            .iter()
            .enumerate()
            .any(|(i, k)| (k + &s(d.dual_coxeter(i).expect("factor"))).is_zero())
    }

    pub fn abelian_nondegenerate(&self) -> bool {
        self.abelian.is_empty() || !linalg::det(&self.abelian).is_zero()
    }

    /// Nondegenerate abelian block and non-constant simple levels.
    pub fn is_generic(&self) -> bool {
        self.abelian_nondegenerate() && self.simple.iter().all(|k| !k.is_constant())
    }

    /// Level on the product datum.
    pub fn direct_sum(&self, other: &Level) -> Level {
        let (a, b) = (self.abelian.len(), other.abelian.len());
        let mut ab = vec![vec![Scalar::zero(); a + b]; a + b];
        for i in 0..a {
            for j in 0..a {
                ab[i][j] = self.abelian[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                ab[a + i][a + j] = other.abelian[i][j].clone();
            }
        }
        let mut simple = self.simple.clone();
        simple.extend(other.simple.iter().cloned());
        Level { abelian: ab, simple }
    }

    /// Level `k[n]` on each simple factor; on the center `(n - K⁻¹)⁻¹`.
    pub fn shifted(&self, d: &RootDatum, n: i64) -> Result<Level> {
        let simple = self
            .simple
            .iter()
            .enumerate()
            .map(|(i, k)| shifted_level(k, n, d.dual_coxeter(i)?))
            .collect::<Result<Vec<_>>>()?;
        let z = self.abelian.len();
        let abelian = if z == 0 {
            Vec::new()
        } else {
            let kinv = linalg::inverse(&self.abelian)
                .ok_or_else(|| Error::pre("critical", "abelian block is degenerate"))?;
            let m: Vec<Vec<Scalar>> = (0..z)
                .map(|i| {
                    (0..z)
                        .map(|j| if i == j { s(n) - &kinv[i][j] } else { -&kinv[i][j] })
                        .collect()
                })
                .collect();
            linalg::inverse(&m).ok_or_else(|| Error::pre("shift pole", format!("shift by {n} is singular")))?
        };
        Ok(Level { abelian, simple })
    }

    /// `κ(x, y)` for coweights.
    pub fn form(&self, d: &RootDatum, x: &[Q], y: &[Q]) -> Scalar {
        let mut t = Scalar::zero();
        for (i, k) in self.simple.iter().enumerate() {
            t = t + k * &Scalar::from_q(d.coweight_form_on(i, x, y));
        }
        let (_, a) = d.split_coweight(x);
        let (_, b) = d.split_coweight(y);
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                t = t + &self.abelian[i][j] * &Scalar::from_q(ai * bj);
            }
        }
        t
    }

    /// The weight `κ(x, ·)`, in character coordinates.
    pub fn apply(&self, d: &RootDatum, x: &[Q]) -> Vec<Scalar> {
        let n = d.rank();
        (0..n)
            .map(|j| {
                let e: Vec<Q> = (0..n).map(|i| Q::from_integer(i64::from(i == j).into())).collect();
                self.form(d, x, &e)
            })
            .collect()
    }

    /// Compact text form: a bare scalar for one simple factor or a rank-one
    /// torus, JSON otherwise.
    pub fn short(&self) -> String {
        match (self.simple.len(), self.abelian.len()) {
            (1, 0) => self.simple[0].to_string(),
            (0, 1) => self.abelian[0][0].to_string(),
            _ => serde_json::to_string(self).expect("serializable"),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Solve `1/(k+ȟ) + 1/(l+ȟ) = n` for `l`.
pub fn shifted_level(k: &Scalar, n: i64, hv: i64) -> Result<Scalar> {
    let kh = k + &s(hv);
    if kh.is_zero() {
        return Err(Error::pre("critical", format!("k = {k} is critical")));
    }
    let den = &(&s(n) * &kh) - &Scalar::one();
    if den.is_zero() {
        return Err(Error::pre("shift pole", format!("{n}(k+{hv}) = 1")));
    }
    Ok(kh.checked_div(&den).expect("nonzero") - s(hv))
}

/// `k[n1][n2]...`.
pub fn shifted_chain(k: &Scalar, shifts: &[i64], hv: i64) -> Result<Scalar> {
    shifts.iter().try_fold(k.clone(), |acc, &n| shifted_level(&acc, n, hv))
}

/// `Σ_s C_s(λ)/(2(k_s+ȟ_s)) + (λ|z, K⁻¹ λ|z)/2`.
pub fn casimir_offset(d: &RootDatum, lambda: &[Q], kappa: &Level) -> Result<Scalar> {
    let mut t = Scalar::zero();
    for (i, k) in kappa.simple.iter().enumerate() {
        let c = d.casimir(i, lambda);
        if c == Q::from_integer(0.into()) {
            continue;
        }
        let kh = k + &s(d.dual_coxeter(i)?);
        if kh.is_zero() {
            return Err(Error::pre("critical", format!("factor {i} is at the critical level")));
        }
        let den = &s(2) * &kh;
        t = t + Scalar::from_q(c).checked_div(&den).expect("nonzero");
    }
    t = t + abelian_offset(d, lambda, kappa)?;
    Ok(t)
}

/// `(λ|z, K⁻¹ λ|z)/2` on the center.
pub fn abelian_offset(d: &RootDatum, lambda: &[Q], kappa: &Level) -> Result<Scalar> {
    let c = d.central_coords(lambda);
    if c.iter().all(|x| x == &Q::from_integer(0.into())) {
        return Ok(Scalar::zero());
    }
    let kinv = linalg::inverse(&kappa.abelian)
        .ok_or_else(|| Error::pre("degenerate level", "abelian block is not invertible"))?;
    let cs: Vec<Scalar> = c.into_iter().map(Scalar::from_q).collect();
    let v = linalg::mat_vec(&kinv, &cs);
    let quad = linalg::dot(&cs, &v);
    Ok(quad.checked_div(&s(2)).expect("2"))
}

pub fn central_charge_cdo(d: &RootDatum) -> i64 {
    2 * d.dimension() as i64
}

/// Integer weight `κ(x, ·)` if it lies in `X*(T)`.
pub fn integral_weight(v: &[Scalar]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.as_i64()).collect()
}

pub fn scalar_vec(v: &[Q]) -> Vec<Scalar> {
    v.iter().cloned().map(Scalar::from_q).collect()
}

pub fn int_scalar_vec(v: &[i64]) -> Vec<Scalar> {
    scalar_vec(&qvec(v))
}

pub fn is_zero_scalar(x: &Scalar) -> bool {
    Field::is_zero(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Scalar {
        Scalar::var("k")
    }

    #[test]
    fn sl2_dual_and_shift() {
        let d = RootDatum::preset("SL2").unwrap();
        let l = Level::generic(&d);
        assert_eq!(l.dual(&d).simple[0].to_string(), "(-k-4)");
        assert_eq!(shifted_level(&k(), 1, 2).unwrap().to_string(), "(-k)/(k+1)");
        assert_eq!(shifted_level(&k(), 0, 2).unwrap(), l.dual(&d).simple[0]);
        assert!(shifted_level(&s(-2), 1, 2).is_err());
        assert!(shifted_level(&s(-1), 1, 2).is_err());
    }

    #[test]
    fn shift_chain_law() {
        assert_eq!(
            shifted_chain(&k(), &[2, 0, -1], 2).unwrap(),
            shifted_level(&k(), 1, 2).unwrap()
        );
    }

    #[test]
    fn central_charges() {
        assert_eq!(central_charge_cdo(&RootDatum::torus(3)), 6);
        assert_eq!(central_charge_cdo(&RootDatum::preset("SL2").unwrap()), 6);
        assert_eq!(central_charge_cdo(&RootDatum::preset("SL(3)").unwrap()), 16);
    }

    #[test]
    fn casimir_sl2() {
        let d = RootDatum::preset("SL2").unwrap();
        let l = Level::generic(&d);
        let off = casimir_offset(&d, &d.fundamental_weight(0), &l).unwrap();
        assert_eq!(off.to_string(), "(3)/(4k+8)");
    }

    #[test]
    fn torus_offsets() {
        let d = RootDatum::torus(2);
        let l = Level::uniform(&d, &Scalar::one());
        let off = casimir_offset(&d, &qvec(&[1, 1]), &l).unwrap();
        assert_eq!(off, Scalar::one());
        assert_eq!(l.dual(&d).abelian[0][0], s(-1));
    }
}
