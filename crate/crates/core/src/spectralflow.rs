//! Spectral-flow groups and symbolic module labels.

use std::fmt;

use num_traits::Zero;

use crate::charring::GradedCharacter;
use crate::error::{Error, Result};
use crate::levels::{integral_weight, Level};
use crate::poly::Q;
use crate::rootdata::{is_integral, qadd, qdot, qvec, Coweight, RootDatum, Weight};
use crate::scalar::Scalar;

/// Symbolic name of a module.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModuleLabel {
    Zero,
    /// The one-dimensional trivial object (convolution of dual Weyl modules).
    Unit,
    Fock { level: Level, weight: Vec<Scalar> },
    Weyl { level: Level, weight: Weight },
    /// Shifted chiral differential operators `D^κ[n]`.
    Cdo { level: Level, shift: i64 },
    /// Equivariant W-algebra `W^κ_G[n]`.
    EqW { level: Level, shift: i64 },
    /// `T^κ_{λ,μ̌}`.
    Tw { level: Level, weight: Weight, coweight: Coweight },
    L1 { weight: Weight },
    Twist { param: Coweight, inner: Box<ModuleLabel> },
    /// `⊕_λ T^κ_{λ,μ̌} ⊗ (t · V^{κ*}_{-w0 λ})` over dominant `λ`.
    PwSum { level: Level, coweight: Coweight, twist: Coweight },
    Tensor(Vec<ModuleLabel>),
}

impl ModuleLabel {
    pub fn twist(param: Coweight, inner: ModuleLabel) -> Self {
        ModuleLabel::Twist { param, inner: Box::new(inner) }.normalize()
    }

    /// Collapse trivial twists, merge nested twists and simplify tensors.
    pub fn normalize(self) -> Self {
        match self {
            ModuleLabel::Twist { param, inner } => {
                let inner = inner.normalize();
                match inner {
                    ModuleLabel::Zero => ModuleLabel::Zero,
                    ModuleLabel::Twist { param: p2, inner: i2 } => {
                        ModuleLabel::Twist { param: qadd(&param, &p2), inner: i2 }.normalize()
                    }
                    other if param.iter().all(Zero::is_zero) => other,
                    other => ModuleLabel::Twist { param, inner: Box::new(other) },
                }
            }
            ModuleLabel::Tensor(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match f.normalize() {
                        ModuleLabel::Zero => return ModuleLabel::Zero,
                        ModuleLabel::Unit => {}
                        ModuleLabel::Tensor(inner) => out.extend(inner),
                        x => out.push(x),
                    }
                }
                match out.len() {
                    0 => ModuleLabel::Unit,
                    1 => out.pop().expect("one"),
                    _ => ModuleLabel::Tensor(out),
                }
            }
            other => other,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ModuleLabel::Zero)
    }

    pub fn to_sexpr(&self) -> String {
        self.to_string()
    }

    pub fn parse(d: &RootDatum, text: &str) -> Result<Self> {
        let toks = tokenize(text)?;
        let mut i = 0;
        let sx = read_sexpr(text, &toks, &mut i)?;
        if i != toks.len() {
            return Err(Error::parse(text, toks[i].1, "trailing input"));
        }
        label_from_sexpr(d, text, &sx)
    }
}

fn atom(s: &str) -> String {
    let bare = !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || "_-/.".contains(c));
    if bare {
        s.to_string()
    } else {
        format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

fn list<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| atom(&x.to_string())).collect();
    format!("({})", parts.join(" "))
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleLabel::Zero => write!(f, "Zero"),
            ModuleLabel::Unit => write!(f, "Unit"),
            ModuleLabel::Fock { level, weight } => write!(f, "(fock {} {})", atom(&level.short()), list(weight)),
            ModuleLabel::Weyl { level, weight } => write!(f, "(weyl {} {})", atom(&level.short()), list(weight)),
            ModuleLabel::Cdo { level, shift } => write!(f, "(cdo {} {shift})", atom(&level.short())),
            ModuleLabel::EqW { level, shift } => write!(f, "(eqw {} {shift})", atom(&level.short())),
            ModuleLabel::Tw { level, weight, coweight } => {
                write!(f, "(tw {} {} {})", atom(&level.short()), list(weight), list(coweight))
            }
            ModuleLabel::L1 { weight } => write!(f, "(l1 {})", list(weight)),
            ModuleLabel::Twist { param, inner } => {
                let parts: Vec<String> = param.iter().map(|x| atom(&x.to_string())).collect();
                write!(f, "(twist (coweight {}) {inner})", parts.join(" "))
            }
            ModuleLabel::PwSum { level, coweight, twist } => {
                write!(f, "(pwsum {} {} {})", atom(&level.short()), list(coweight), list(twist))
            }
            ModuleLabel::Tensor(fs) => {
                write!(f, "(tensor")?;
                for x in fs {
                    write!(f, " {x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let cs: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < cs.len() {
        let (pos, c) = cs[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((Tok::Open, pos));
                i += 1;
            }
            ')' => {
                out.push((Tok::Close, pos));
                i += 1;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    let Some(&(_, c)) = cs.get(i) else {
                        return Err(Error::parse(text, pos, "unterminated string"));
                    };
                    i += 1;
                    match c {
                        '"' => break,
                        '\\' => {
                            if let Some(&(_, e)) = cs.get(i) {
                                s.push(e);
                                i += 1;
                            }
                        }
                        c => s.push(c),
                    }
                }
                out.push((Tok::Atom(s), pos));
            }
            _ => {
                let mut s = String::new();
                while let Some(&(_, c)) = cs.get(i) {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' {
                        break;
                    }
                    s.push(c);
                    i += 1;
                }
                out.push((Tok::Atom(s), pos));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Sx {
    Atom(String, usize),
    List(Vec<Sx>, usize),
}

impl Sx {
    fn pos(&self) -> usize {
        match self {
            Sx::Atom(_, p) | Sx::List(_, p) => *p,
        }
    }
}

fn read_sexpr(text: &str, toks: &[(Tok, usize)], i: &mut usize) -> Result<Sx> {
    let Some((t, pos)) = toks.get(*i) else {
        return Err(Error::parse(text, text.len(), "unexpected end of input"));
    };
    *i += 1;
    match t {
        Tok::Atom(s) => Ok(Sx::Atom(s.clone(), *pos)),
        Tok::Close => Err(Error::parse(text, *pos, "unexpected ')'")),
        Tok::Open => {
            let mut items = Vec::new();
            loop {
                match toks.get(*i) {
                    None => return Err(Error::parse(text, text.len(), "missing ')'")),
                    Some((Tok::Close, _)) => {
                        *i += 1;
                        return Ok(Sx::List(items, *pos));
                    }
                    Some(_) => items.push(read_sexpr(text, toks, i)?),
                }
            }
        }
    }
}

fn parse_level(d: &RootDatum, text: &str, sx: &Sx) -> Result<Level> {
    let Sx::Atom(s, pos) = sx else {
        return Err(Error::parse(text, sx.pos(), "expected a level"));
    };
    if s.starts_with('{') {
        let l: Level = serde_json::from_str(s).map_err(|e| Error::parse(text, *pos, e.to_string()))?;
        return Level::new(d, l.abelian, l.simple);
    }
    let k = Scalar::parse(s).map_err(|_| Error::parse(text, *pos, format!("bad level {s:?}")))?;
    match (d.components().len(), d.center_rank()) {
        (1, 0) => Ok(Level { abelian: Vec::new(), simple: vec![k] }),
        (0, 1) => Ok(Level { abelian: vec![vec![k]], simple: Vec::new() }),
        _ => Ok(Level::uniform(d, &k)),
    }
}

fn parse_qlist(text: &str, sx: &Sx) -> Result<Vec<Q>> {
    let Sx::List(items, _) = sx else {
        return Err(Error::parse(text, sx.pos(), "expected a list of numbers"));
    };
    items
        .iter()
        .map(|x| match x {
            Sx::Atom(s, p) => s.parse::<Q>().map_err(|_| Error::parse(text, *p, format!("bad number {s:?}"))),
            Sx::List(_, p) => Err(Error::parse(text, *p, "expected a number")),
        })
        .collect()
}

fn parse_slist(text: &str, sx: &Sx) -> Result<Vec<Scalar>> {
    let Sx::List(items, _) = sx else {
        return Err(Error::parse(text, sx.pos(), "expected a list"));
    };
    items
        .iter()
        .map(|x| match x {
            Sx::Atom(s, p) => Scalar::parse(s).map_err(|_| Error::parse(text, *p, format!("bad scalar {s:?}"))),
            Sx::List(_, p) => Err(Error::parse(text, *p, "expected a scalar")),
        })
        .collect()
}

fn parse_int(text: &str, sx: &Sx) -> Result<i64> {
    match sx {
        Sx::Atom(s, p) => s.parse().map_err(|_| Error::parse(text, *p, "expected an integer")),
        Sx::List(_, p) => Err(Error::parse(text, *p, "expected an integer")),
    }
}

fn label_from_sexpr(d: &RootDatum, text: &str, sx: &Sx) -> Result<ModuleLabel> {
    match sx {
        Sx::Atom(s, p) => match s.as_str() {
            "Zero" => Ok(ModuleLabel::Zero),
            "Unit" => Ok(ModuleLabel::Unit),
            _ => Err(Error::parse(text, *p, format!("unknown label {s:?}"))),
        },
        Sx::List(items, p) => {
            let Some(Sx::Atom(head, hp)) = items.first() else {
                return Err(Error::parse(text, *p, "expected a label head"));
            };
            let args = &items[1..];
            let want = |n: usize| -> Result<()> {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(Error::parse(text, *hp, format!("{head} takes {n} arguments")))
                }
            };
            match head.as_str() {
                "fock" => {
                    want(2)?;
                    Ok(ModuleLabel::Fock { level: parse_level(d, text, &args[0])?, weight: parse_slist(text, &args[1])? })
                }
                "weyl" => {
                    want(2)?;
                    Ok(ModuleLabel::Weyl { level: parse_level(d, text, &args[0])?, weight: parse_qlist(text, &args[1])? })
                }
                "cdo" => {
                    want(2)?;
                    Ok(ModuleLabel::Cdo { level: parse_level(d, text, &args[0])?, shift: parse_int(text, &args[1])? })
                }
                "eqw" => {
                    want(2)?;
                    Ok(ModuleLabel::EqW { level: parse_level(d, text, &args[0])?, shift: parse_int(text, &args[1])? })
                }
                "tw" => {
                    want(3)?;
                    Ok(ModuleLabel::Tw {
                        level: parse_level(d, text, &args[0])?,
                        weight: parse_qlist(text, &args[1])?,
                        coweight: parse_qlist(text, &args[2])?,
                    })
                }
                "l1" => {
                    want(1)?;
                    Ok(ModuleLabel::L1 { weight: parse_qlist(text, &args[0])? })
                }
                "twist" => {
                    want(2)?;
                    let Sx::List(cw, cp) = &args[0] else {
                        return Err(Error::parse(text, args[0].pos(), "expected (coweight ...)"));
                    };
                    match cw.first() {
                        Some(Sx::Atom(h, _)) if h == "coweight" => {}
                        _ => return Err(Error::parse(text, *cp, "expected (coweight ...)")),
                    }
                    let param = parse_qlist(text, &Sx::List(cw[1..].to_vec(), *cp))?;
                    Ok(ModuleLabel::Twist { param, inner: Box::new(label_from_sexpr(d, text, &args[1])?) })
                }
                "pwsum" => {
                    want(3)?;
                    Ok(ModuleLabel::PwSum {
                        level: parse_level(d, text, &args[0])?,
                        coweight: parse_qlist(text, &args[1])?,
                        twist: parse_qlist(text, &args[2])?,
                    })
                }
                "tensor" => Ok(ModuleLabel::Tensor(
                    args.iter().map(|a| label_from_sexpr(d, text, a)).collect::<Result<_>>()?,
                )),
                _ => Err(Error::parse(text, *hp, format!("unknown label head {head:?}"))),
            }
        }
    }
}

/// Vertex algebra whose spectral-flow group is requested.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SFContext {
    Heisenberg,
    Affine,
    Cdo,
    EqW,
    Fermions,
}

/// Generators of a spectral-flow group. `continuous` spans a vector-space
/// summand (the Heisenberg part); `lattice` generates the discrete part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SFGroup {
    pub ambient: String,
    pub lattice: Vec<Vec<Q>>,
    pub continuous: Vec<Vec<Q>>,
}

fn unit_vectors(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| (0..n).map(|j| Q::from_integer(i64::from(i == j).into())).collect())
        .collect()
}

/// Fundamental coweights `ϖ̌_i` (dual to the simple roots, no central part).
pub fn fundamental_coweights(d: &RootDatum) -> Vec<Coweight> {
    let dual = d.dual();
    (0..d.semisimple_rank()).map(|i| dual.fundamental_weight(i)).collect()
}

pub fn sf_group(d: &RootDatum, ctx: SFContext) -> SFGroup {
    let n = d.rank();
    let center: Vec<Vec<Q>> = d.center_basis().iter().map(|z| qvec(z)).collect();
    match ctx {
        SFContext::Heisenberg => SFGroup { ambient: "h".into(), lattice: Vec::new(), continuous: unit_vectors(n) },
        SFContext::Affine => SFGroup { ambient: "h".into(), lattice: fundamental_coweights(d), continuous: center },
        SFContext::Cdo => {
            let mut lattice = Vec::new();
            for g in unit_vectors(n) {
                let mut v = g;
                v.extend(vec![Q::zero(); n]);
                lattice.push(v);
            }
            for x in fundamental_coweights(d) {
                let mut v = vec![Q::zero(); n];
                v.extend(x);
                lattice.push(v);
            }
            SFGroup { ambient: "X_*(T) x coweights".into(), lattice, continuous: Vec::new() }
        }
        SFContext::EqW => SFGroup { ambient: "X_*(T)".into(), lattice: unit_vectors(n), continuous: Vec::new() },
        SFContext::Fermions => SFGroup {
            ambient: "Z^positive roots".into(),
            lattice: unit_vectors(d.positive_roots().len()),
            continuous: Vec::new(),
        },
    }
}

/// `(γ, x) ↦ (γ + x, ᵗw₀ x)`.
pub fn cdo_sf_embed(d: &RootDatum, gamma: &[Q], x: &[Q]) -> Result<(Coweight, Coweight)> {
    if !is_integral(gamma) {
        return Err(Error::pre("cocharacter lattice", "γ is not in X_*(T)"));
    }
    if !d.in_coweight_lattice(x) {
        return Err(Error::pre("coweight lattice", "x is not a coweight"));
    }
    Ok((qadd(gamma, x), d.w0_coweight(x)))
}

/// `x · F_λ = F_{λ - κ(x,·)}`.
pub fn twist_fock(d: &RootDatum, x: &[Q], label: &ModuleLabel) -> Result<ModuleLabel> {
    let ModuleLabel::Fock { level, weight } = label else {
        return Err(Error::pre("fock label", "twist_fock expects a Fock label"));
    };
    if !level.abelian_nondegenerate() {
        return Err(Error::pre("degenerate level", "κ is degenerate on the center"));
    }
    let kx = level.apply(d, x);
    Ok(ModuleLabel::Fock {
        level: level.clone(),
        weight: weight.iter().zip(&kx).map(|(a, b)| a - b).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Root vector for a root given by simple-root coefficients.
    Root(Vec<i64>),
    Cartan(Coweight),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeRule {
    pub old_index: i64,
    pub correction: Scalar,
}

/// Mode of the untwisted action realizing `g_(n)` after twisting by `x`.
pub fn twist_mode_rule(d: &RootDatum, kappa: &Level, x: &[Q], g: &Generator, n: i64) -> Result<ModeRule> {
    if !d.in_coweight_lattice(x) {
        return Err(Error::pre("coweight lattice", "twist parameter is not a coweight"));
    }
    match g {
        Generator::Root(c) => {
            let a = qdot(&d.root_vector(c), x);
            let ai: i64 = a.to_integer().try_into().expect("small");
            Ok(ModeRule { old_index: n - ai, correction: Scalar::zero() })
        }
        Generator::Cartan(h) => Ok(ModeRule {
            old_index: n,
            correction: if n == 0 { -kappa.form(d, x, h) } else { Scalar::zero() },
        }),
    }
}

/// Whether twisting by `x` preserves the Kazhdan–Lusztig category.
pub fn kl_stable(d: &RootDatum, kappa: &Level, x: &[Q]) -> bool {
    if d.root_coords(x).iter().any(|v| !v.is_zero()) {
        return false;
    }
    integral_weight(&kappa.apply(d, x)).is_some()
}

/// `λ_L(h) + λ_R(h')` is integral on the support of `ch`.
pub fn sf_integrality_check(h: &[Q], h2: &[Q], ch: &GradedCharacter) -> bool {
    ch.terms()
        .all(|(k, _)| (qdot(&k.left, h) + qdot(&k.right, h2)).is_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_normalization() {
        let d = RootDatum::torus(1);
        let f = ModuleLabel::Fock { level: Level::uniform(&d, &Scalar::one()), weight: vec![Scalar::one()] };
        assert_eq!(ModuleLabel::twist(qvec(&[0]), f.clone()), f);
        let t = ModuleLabel::twist(qvec(&[1]), ModuleLabel::twist(qvec(&[2]), f.clone()));
        assert_eq!(t, ModuleLabel::twist(qvec(&[3]), f));
    }

    #[test]
    fn sexpr_round_trip() {
        let d = RootDatum::preset("SL2").unwrap();
        let l = Level::generic(&d);
        let lab = ModuleLabel::Tensor(vec![
            ModuleLabel::Tw { level: l.clone(), weight: qvec(&[1]), coweight: qvec(&[0]) },
            ModuleLabel::Twist {
                param: qvec(&[-1]),
                inner: Box::new(ModuleLabel::Weyl { level: l.dual(&d), weight: qvec(&[1]) }),
            },
        ]);
        let s = lab.to_string();
        assert_eq!(s, "(tensor (tw k (1) (0)) (twist (coweight -1) (weyl \"(-k-4)\" (1))))");
        assert_eq!(ModuleLabel::parse(&d, &s).unwrap(), lab);
    }

    #[test]
    fn fock_example_format() {
        let d = RootDatum::torus(2);
        let lab = ModuleLabel::Twist {
            param: qvec(&[1, 0]),
            inner: Box::new(ModuleLabel::Fock {
                level: Level::uniform(&d, &Scalar::var("kappa")),
                weight: vec![Scalar::one(), Scalar::zero()],
            }),
        };
        assert!(lab.to_string().starts_with("(twist (coweight 1 0) (fock"));
    }

    #[test]
    fn sl2_mode_rule() {
        let d = RootDatum::preset("SL2").unwrap();
        let k = Level::generic(&d);
        let half = vec![Q::new(1.into(), 2.into())];
        let r = twist_mode_rule(&d, &k, &half, &Generator::Root(vec![1]), 0).unwrap();
        assert_eq!(r.old_index, -1);
    }
}
