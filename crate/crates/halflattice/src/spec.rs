//! Module specifications: a finite window of Fock sectors.

use std::collections::{BTreeMap, BTreeSet};

use cdo_core::error::{Error, Result};
use cdo_core::rootdata::{fmt_vec, to_ints};
use cdo_core::{Scalar, Q};
use serde::{Deserialize, Serialize};

use crate::engine::Engine;
use crate::state::{Basis, Sector, State};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorSpec {
    pub sector: Sector,
    /// Twist `γ` and base character `λ` the sector came from, when known.
    pub gamma: Option<Vec<i64>>,
    pub base: Option<Vec<i64>>,
    /// Distinguishes repeated copies of the same sector.
    pub copy: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusModuleSpec {
    pub rank: usize,
    pub kappa: Vec<Vec<Q>>,
    pub sectors: Vec<SectorSpec>,
    pub truncation: u32,
}

#[derive(Serialize, Deserialize)]
struct SpecFile {
    rank: usize,
    kappa: Vec<Vec<String>>,
    truncation: u32,
    #[serde(default, rename = "sector")]
    sectors: Vec<SectorFile>,
}

#[derive(Serialize, Deserialize)]
struct SectorFile {
    left: Vec<String>,
    right: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<Vec<i64>>,
    #[serde(default)]
    copy: usize,
}

fn parse_q(s: &str) -> Result<Q> {
    Scalar::parse(s)?
        .as_rational()
        .ok_or_else(|| Error::parse(s, 0, "expected an exact rational number"))
}

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

impl TorusModuleSpec {
    pub fn new(kappa: Vec<Vec<Q>>, sectors: Vec<SectorSpec>, truncation: u32) -> Result<Self> {
        let spec = TorusModuleSpec { rank: kappa.len(), kappa, sectors, truncation };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        Engine::new(self.kappa.clone(), self.truncation)?;
        let mut seen = BTreeSet::new();
        for s in &self.sectors {
            if s.sector.left.len() != self.rank || s.sector.right.len() != self.rank {
                return Err(Error::pre("sector shape", format!("sector {} has the wrong rank", s.sector)));
            }
            if !seen.insert(s.clone()) {
                return Err(Error::pre("distinct sectors", format!("sector {} is listed twice", s.sector)));
            }
        }
        Ok(())
    }

    pub fn engine(&self) -> Engine {
        Engine::new(self.kappa.clone(), self.truncation).expect("validated")
    }

    /// Sectors `(α - κγ, -α)` of `γ · D_T` for `α ∈ [-w, w]^r`.
    pub fn cdo(kappa: Vec<Vec<Q>>, gamma: &[i64], window: i64, truncation: u32) -> Result<Self> {
        let e = Engine::new(kappa.clone(), truncation)?;
        Ok(TorusModuleSpec { rank: kappa.len(), sectors: cdo_sectors(&e, gamma, window, 0), kappa, truncation })
    }

    /// Disjoint union of `γ_i · D_T` windows.
    pub fn cdo_sum(kappa: Vec<Vec<Q>>, gammas: &[Vec<i64>], window: i64, truncation: u32) -> Result<Self> {
        let e = Engine::new(kappa.clone(), truncation)?;
        let mut sectors = Vec::new();
        for (i, g) in gammas.iter().enumerate() {
            let copy = gammas[..i].iter().filter(|h| *h == g).count();
            sectors.extend(cdo_sectors(&e, g, window, copy));
        }
        TorusModuleSpec::new(kappa, sectors, truncation)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let f: SpecFile = toml::from_str(text).map_err(|e| {
            let pos = e.span().map(|s| s.start).unwrap_or(0);
            Error::parse(text, pos, e.message().to_string())
        })?;
        let kappa = f
            .kappa
            .iter()
            .map(|r| r.iter().map(|x| parse_q(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if kappa.len() != f.rank {
            return Err(Error::pre("level shape", format!("κ must be {0}x{0}", f.rank)));
        }
        let sectors = f
            .sectors
            .iter()
            .map(|s| {
                Ok(SectorSpec {
                    sector: Sector::new(
                        s.left.iter().map(|x| parse_q(x)).collect::<Result<_>>()?,
                        s.right.iter().map(|x| parse_q(x)).collect::<Result<_>>()?,
                    ),
                    gamma: s.gamma.clone(),
                    base: s.base.clone(),
                    copy: s.copy,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        TorusModuleSpec::new(kappa, sectors, f.truncation)
    }

    pub fn to_toml(&self) -> String {
        let f = SpecFile {
            rank: self.rank,
            kappa: self.kappa.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
            truncation: self.truncation,
            sectors: self
                .sectors
                .iter()
                .map(|s| SectorFile {
                    left: s.sector.left.iter().map(|x| x.to_string()).collect(),
                    right: s.sector.right.iter().map(|x| x.to_string()).collect(),
                    gamma: s.gamma.clone(),
                    base: s.base.clone(),
                    copy: s.copy,
                })
                .collect(),
        };
        toml::to_string(&f).expect("serializable")
    }

    /// Vacuum vector of every listed sector.
    pub fn vacua(&self) -> Vec<State> {
        self.sectors.iter().map(|s| State::vacuum(s.sector.clone())).collect()
    }

    pub fn basis(&self, d: u32) -> Vec<Basis> {
        let sectors: Vec<Sector> = self.sectors.iter().map(|s| s.sector.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        self.engine().basis_up_to(&sectors, d)
    }
}

fn cdo_sectors(e: &Engine, gamma: &[i64], window: i64, copy: usize) -> Vec<SectorSpec> {
    let r = e.rank();
    let kg = e.kappa_of(&gamma.iter().map(|&x| qi(x)).collect::<Vec<_>>());
    let mut alphas: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..r {
        alphas = alphas
            .into_iter()
            .flat_map(|a| (-window..=window).map(move |x| {
                let mut b = a.clone();
                b.push(x);
                b
            }))
            .collect();
    }
    alphas
        .into_iter()
        .map(|a| SectorSpec {
            sector: Sector::new(
                a.iter().zip(&kg).map(|(&x, k)| qi(x) - k).collect(),
                a.iter().map(|&x| qi(-x)).collect(),
            ),
            gamma: Some(gamma.to_vec()),
            base: Some(a),
            copy,
        })
        .collect()
}

/// Relabel sectors by the spectral flow `γ`: `λ_L ↦ λ_L - κ(γ,·)`.
pub fn sf_twist_state(gamma: &[i64], spec: &TorusModuleSpec) -> Result<TorusModuleSpec> {
    if gamma.len() != spec.rank {
        return Err(Error::pre("cocharacter lattice", format!("γ must have {} integer coordinates", spec.rank)));
    }
    let e = spec.engine();
    let kg = e.kappa_of(&gamma.iter().map(|&x| qi(x)).collect::<Vec<_>>());
    let sectors = spec
        .sectors
        .iter()
        .map(|s| SectorSpec {
            sector: twist_sector(&s.sector, &kg),
            gamma: s.gamma.as_ref().map(|g| g.iter().zip(gamma).map(|(a, b)| a + b).collect()),
            base: s.base.clone(),
            copy: s.copy,
        })
        .collect();
    Ok(TorusModuleSpec { sectors, ..spec.clone() })
}

fn twist_sector(s: &Sector, kg: &[Q]) -> Sector {
    Sector::new(s.left.iter().zip(kg).map(|(x, k)| x - k).collect(), s.right.clone())
}

/// Identity on oscillators, relabelling the sector by the twist.
pub fn twist_intertwiner(e: &Engine, gamma: &[i64], v: &State) -> State {
    let kg = e.kappa_of(&gamma.iter().map(|&x| qi(x)).collect::<Vec<_>>());
    let mut out = State { truncated: v.truncated, ..State::zero() };
    for (b, c) in &v.terms {
        out.add_term(Basis { sector: twist_sector(&b.sector, &kg), ..b.clone() }, c.clone());
    }
    out
}

/// `γ' = κ⁻¹(λ_L + λ_R)`, integral on admissible sectors.
pub fn sector_gamma(e: &Engine, s: &Sector) -> Result<Vec<i64>> {
    let sum: Vec<Q> = s.left.iter().zip(&s.right).map(|(a, b)| a + b).collect();
    let g = e.kappa_inv_of(&sum);
    to_ints(&g).ok_or_else(|| {
        Error::pre(
            "admissible sector",
            format!("{s}: λ_L + λ_R = {} is not in κ(X_*(T))", fmt_vec(&sum)),
        )
    })
}

/// Twist labels of the simple summands: one `γ = -κ⁻¹(λ_L + λ_R)` per
/// orbit of sectors under `(+α, -α)`.
pub fn classify_module(spec: &TorusModuleSpec) -> Result<Vec<Vec<i64>>> {
    let e = spec.engine();
    let mut counts: BTreeMap<Sector, usize> = BTreeMap::new();
    for s in &spec.sectors {
        sector_gamma(&e, &s.sector)?;
        *counts.entry(s.sector.clone()).or_insert(0) += 1;
    }
    let keys: Vec<Sector> = counts.keys().cloned().collect();
    let mut seen: BTreeSet<Sector> = BTreeSet::new();
    let mut out = Vec::new();
    for start in &keys {
        if seen.contains(start) {
            continue;
        }
        let mut orbit = vec![start.clone()];
        seen.insert(start.clone());
        let mut i = 0;
        while i < orbit.len() {
            for d in 0..spec.rank {
                for sign in [1i64, -1] {
                    let mut a = vec![0i64; spec.rank];
                    a[d] = sign;
                    let n = orbit[i].shift(&a);
                    if counts.contains_key(&n) && seen.insert(n.clone()) {
                        orbit.push(n);
                    }
                }
            }
            i += 1;
        }
        let mult = counts[start];
        if orbit.iter().any(|s| counts[s] != mult) {
            return Err(Error::pre("sector multiplicities", format!("orbit of {start} has uneven multiplicities")));
        }
        let g: Vec<i64> = sector_gamma(&e, start)?.iter().map(|x| -x).collect();
        for _ in 0..mult {
            out.push(g.clone());
        }
    }
    out.sort();
    Ok(out)
}
