//! Convolution calculus for labeled objects with left and right level tags.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::levels::Level;
use crate::poly::Q;
use crate::rootdata::{fmt_vec, qneg, RootDatum};
use crate::scalar::Scalar;
use crate::spectralflow::{kl_stable, ModuleLabel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvExpr {
    Empty,
    Leaf(ModuleLabel),
    Conv(Box<ConvExpr>, Box<ConvExpr>),
}

impl ConvExpr {
    pub fn leaf(l: ModuleLabel) -> Self {
        ConvExpr::Leaf(l)
    }

    pub fn conv(a: ConvExpr, b: ConvExpr) -> Self {
        ConvExpr::Conv(Box::new(a), Box::new(b))
    }

    /// Left-nested chain `((x0 ∘ x1) ∘ x2) ...`.
    pub fn chain(leaves: Vec<ModuleLabel>) -> Self {
        let mut it = leaves.into_iter();
        let Some(first) = it.next() else {
            return ConvExpr::Empty;
        };
        it.fold(ConvExpr::Leaf(first), |acc, l| ConvExpr::conv(acc, ConvExpr::Leaf(l)))
    }

    pub fn leaves(&self) -> Vec<ModuleLabel> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<ModuleLabel>) {
        match self {
            ConvExpr::Empty => {}
            ConvExpr::Leaf(l) => out.push(l.clone()),
            ConvExpr::Conv(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ConvExpr::Empty | ConvExpr::Leaf(_) => 0,
            ConvExpr::Conv(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// Position of a leaf in a chain; decides which side a one-sided label uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pos {
    Only,
    First,
    Middle,
    Last,
}

pub type Tags = (Option<Level>, Option<Level>);

fn one_sided(l: &ModuleLabel) -> Option<&Level> {
    match l {
        ModuleLabel::Weyl { level, .. } | ModuleLabel::Fock { level, .. } => Some(level),
        _ => None,
    }
}

/// Level tags of a label. One-sided labels report their level on both sides.
pub fn label_tags(d: &RootDatum, l: &ModuleLabel) -> Tags {
    match l {
        ModuleLabel::Cdo { level, shift } => (Some(level.clone()), level.shifted(d, *shift).ok()),
        ModuleLabel::EqW { level, shift } => (None, level.shifted(d, *shift).ok()),
        ModuleLabel::PwSum { level, .. } => (None, Some(level.dual(d))),
        ModuleLabel::Weyl { level, .. } | ModuleLabel::Fock { level, .. } => (Some(level.clone()), Some(level.clone())),
        ModuleLabel::Twist { inner, .. } => label_tags(d, inner),
        ModuleLabel::Tensor(fs) => match fs.last() {
            Some(f) if one_sided(f).is_some() || matches!(f, ModuleLabel::Cdo { .. }) => (None, label_tags(d, f).1),
            _ => (None, None),
        },
        _ => (None, None),
    }
}

pub fn tags_at(d: &RootDatum, l: &ModuleLabel, pos: Pos) -> Tags {
    let (a, b) = label_tags(d, l);
    if one_sided(l).is_none() {
        return (a, b);
    }
    match pos {
        Pos::Only => (a, b),
        Pos::First => (None, b),
        Pos::Last => (a, None),
        Pos::Middle => (None, None),
    }
}

fn pos_of(i: usize, n: usize) -> Pos {
    match (i == 0, i + 1 == n) {
        (true, true) => Pos::Only,
        (true, false) => Pos::First,
        (false, true) => Pos::Last,
        _ => Pos::Middle,
    }
}

/// Outer tags of a chain of leaves.
pub fn outer_tags(d: &RootDatum, leaves: &[ModuleLabel]) -> Tags {
    let n = leaves.len();
    if n == 0 {
        return (None, None);
    }
    (tags_at(d, &leaves[0], pos_of(0, n)).0, tags_at(d, &leaves[n - 1], pos_of(n - 1, n)).1)
}

fn pair_ok(d: &RootDatum, right_of_left: &Option<Level>, left_of_right: &Option<Level>) -> bool {
    match (right_of_left, left_of_right) {
        (Some(r), Some(l)) => &r.dual(d) == l,
        _ => false,
    }
}

/// Every `∘` node satisfies `κ + κ' = -κ_g`.
pub fn check_levels(d: &RootDatum, e: &ConvExpr) -> bool {
    let ls = e.leaves();
    let n = ls.len();
    (1..n).all(|i| {
        let r = tags_at(d, &ls[i - 1], pos_of(i - 1, n)).1;
        let l = tags_at(d, &ls[i], pos_of(i, n)).0;
        pair_ok(d, &r, &l)
    })
}

/// Result of normalization: a single label, or an irreducible chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub leaves: Vec<ModuleLabel>,
    pub left: Option<Level>,
    pub right: Option<Level>,
    /// Cohomological degree; always 0 on the Kazhdan–Lusztig category.
    pub degree: i64,
}

impl NormalForm {
    pub fn is_irreducible(&self) -> bool {
        self.leaves.len() > 1
    }

    pub fn label(&self) -> Option<&ModuleLabel> {
        match self.leaves.as_slice() {
            [l] => Some(l),
            _ => None,
        }
    }

    pub fn render(&self, d: &RootDatum) -> String {
        if self.leaves.is_empty() {
            return "1".into();
        }
        self.leaves.iter().map(|l| render(d, l)).collect::<Vec<_>>().join(" . ")
    }
}

fn is_unit_cdo(l: &ModuleLabel) -> bool {
    matches!(l, ModuleLabel::Cdo { shift: 0, .. })
}

fn untwisted(x: &[Q]) -> bool {
    x.iter().all(Zero::is_zero)
}

/// One rewriting step on an adjacent well-leveled pair.
fn rewrite(d: &RootDatum, a: &ModuleLabel, b: &ModuleLabel) -> Option<ModuleLabel> {
    use ModuleLabel::*;
    if is_unit_cdo(b) {
        return Some(a.clone());
    }
    if is_unit_cdo(a) {
        return Some(b.clone());
    }
    match (a, b) {
        (Cdo { level, shift: m }, Cdo { shift: n, .. }) => Some(Cdo { level: level.clone(), shift: m + n }),
        (EqW { level, shift: m }, Cdo { shift: n, .. }) => Some(EqW { level: level.clone(), shift: m + n }),
        (Weyl { weight, .. }, Cdo { level, shift }) => Some(Weyl { level: level.shifted(d, *shift).ok()?, weight: weight.clone() }),
        (Cdo { level, .. }, Weyl { weight, .. }) => Some(Weyl { level: level.clone(), weight: weight.clone() }),
        (Weyl { weight: lam, .. }, Weyl { weight: mu, .. }) => {
            Some(if *lam == d.minus_w0(mu) { Unit } else { Zero })
        }
        (EqW { level, .. }, Weyl { weight, .. }) => Some(Tw {
            level: level.clone(),
            weight: weight.clone(),
            coweight: vec![Q::zero(); d.rank()],
        }),
        (PwSum { level, coweight, twist }, Weyl { weight, .. }) if untwisted(twist) => Some(Tw {
            level: level.clone(),
            weight: weight.clone(),
            coweight: coweight.clone(),
        }),
        (Tensor(fs), _) => {
            let (last, init) = fs.split_last()?;
            let r = rewrite(d, last, b)?;
            let mut v = init.to_vec();
            v.push(r);
            Some(Tensor(v).normalize())
        }
        _ => None,
    }
}

fn check_kl(d: &RootDatum, l: &ModuleLabel) -> Result<()> {
    match l {
        ModuleLabel::L1 { .. } => Err(Error::pre("KL category", format!("{l} is not a Kazhdan-Lusztig object"))),
        ModuleLabel::Twist { param, inner } => {
            let (a, b) = label_tags(d, inner);
            if let Some(k) = a.or(b) {
                if !kl_stable(d, &k, param) {
                    return Err(Error::pre(
                        "KL category",
                        format!("twist by {} leaves the Kazhdan-Lusztig category", fmt_vec(param)),
                    ));
                }
            }
            check_kl(d, inner)
        }
        ModuleLabel::Tensor(fs) => fs.iter().try_for_each(|f| check_kl(d, f)),
        _ => Ok(()),
    }
}

/// Rewrite a chain to a fixed point. `choose` picks which reducible pair to
/// contract among the candidate indices (pair `i` is `(leaves[i], leaves[i+1])`).
pub fn normalize_chain_with(
    d: &RootDatum,
    leaves: Vec<ModuleLabel>,
    choose: &mut dyn FnMut(&[usize]) -> usize,
) -> Vec<ModuleLabel> {
    let mut cur: Vec<ModuleLabel> = leaves.into_iter().map(ModuleLabel::normalize).collect();
    loop {
        if cur.iter().any(ModuleLabel::is_zero) {
            return vec![ModuleLabel::Zero];
        }
        let cands: Vec<(usize, ModuleLabel)> = (0..cur.len().saturating_sub(1))
            .filter_map(|i| rewrite(d, &cur[i], &cur[i + 1]).map(|r| (i, r)))
            .collect();
        if cands.is_empty() {
            return cur;
        }
        let idx: Vec<usize> = cands.iter().map(|c| c.0).collect();
        let pick = choose(&idx).min(cands.len() - 1);
        let (i, r) = cands[pick].clone();
        cur.splice(i..i + 2, [r]);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    /// Normalize subtrees first, then their concatenation.
    Tree,
}

pub fn normalize(d: &RootDatum, e: &ConvExpr) -> Result<NormalForm> {
    normalize_by(d, e, Strategy::Leftmost)
}

pub fn normalize_by(d: &RootDatum, e: &ConvExpr, s: Strategy) -> Result<NormalForm> {
    match s {
        Strategy::Leftmost => normalize_with(d, e, &mut |_| 0),
        Strategy::Rightmost => normalize_with(d, e, &mut |c| c.len() - 1),
        Strategy::Tree => {
            let (left, right) = prepare(d, e)?;
            let leaves = tree_eval(d, e);
            Ok(NormalForm { leaves, left, right, degree: 0 })
        }
    }
}

fn tree_eval(d: &RootDatum, e: &ConvExpr) -> Vec<ModuleLabel> {
    match e {
        ConvExpr::Empty => Vec::new(),
        ConvExpr::Leaf(l) => normalize_chain_with(d, vec![l.clone()], &mut |_| 0),
        ConvExpr::Conv(a, b) => {
            let mut v = tree_eval(d, a);
            v.extend(tree_eval(d, b));
            normalize_chain_with(d, v, &mut |_| 0)
        }
    }
}

fn prepare(d: &RootDatum, e: &ConvExpr) -> Result<Tags> {
    if !check_levels(d, e) {
        return Err(Error::pre("well-leveled", "some convolution node has κ + κ' ≠ -κ_g"));
    }
    let leaves = e.leaves();
    for l in &leaves {
        check_kl(d, l)?;
    }
    Ok(outer_tags(d, &leaves))
}

pub fn normalize_with(d: &RootDatum, e: &ConvExpr, choose: &mut dyn FnMut(&[usize]) -> usize) -> Result<NormalForm> {
    let (left, right) = prepare(d, e)?;
    let leaves = normalize_chain_with(d, e.leaves(), choose);
    Ok(NormalForm { leaves, left, right, degree: 0 })
}

/// `(X ∘ D[n]) ∘ D[-n]`, through the Peter–Weyl summand for `T^κ_{λ,0}`.
pub fn shift_equivalence_roundtrip(d: &RootDatum, label: &ModuleLabel, n: i64) -> Result<ModuleLabel> {
    use ModuleLabel::*;
    match label {
        Zero => Ok(Zero),
        Tw { level, weight, coweight } if untwisted(coweight) => {
            let partner = Weyl { level: level.dual(d), weight: d.minus_w0(weight) };
            let summand = Tensor(vec![label.clone(), partner]);
            let back = shift_equivalence_roundtrip(d, &summand, n)?;
            let e = ConvExpr::chain(vec![back, Weyl { level: level.clone(), weight: weight.clone() }]);
            single(normalize(d, &e)?)
        }
        _ => {
            let r = label_tags(d, label)
                .1
                .ok_or_else(|| Error::pre("level mismatch", format!("{label} has no right level tag")))?;
            let up = Cdo { level: r.dual(d), shift: n };
            let mid = single(normalize(d, &ConvExpr::chain(vec![label.clone(), up.clone()]))?)?;
            let r2 = label_tags(d, &up).1.ok_or_else(|| Error::pre("shift pole", format!("shift by {n} is singular")))?;
            let down = Cdo { level: r2.dual(d), shift: -n };
            single(normalize(d, &ConvExpr::chain(vec![mid, down]))?)
        }
    }
}

fn single(nf: NormalForm) -> Result<ModuleLabel> {
    match nf.leaves.as_slice() {
        [] => Ok(ModuleLabel::Unit),
        [l] => Ok(l.clone()),
        _ => Err(Error::pre("reducible", format!("no rule applies to {}", nf.leaves.len()))),
    }
}

/// Compact text form used by the expression grammar.
pub fn render(d: &RootDatum, l: &ModuleLabel) -> String {
    match l {
        ModuleLabel::Cdo { level, shift: 0 } => format!("D[{}]", level.short()),
        ModuleLabel::Cdo { level, shift } => format!("D[{},{shift}]", level.short()),
        ModuleLabel::EqW { level, shift: 0 } => format!("W[{}]", level.short()),
        ModuleLabel::EqW { level, shift } => format!("W[{},{shift}]", level.short()),
        ModuleLabel::Weyl { level, weight } => {
            let m = d.fundamental_coords(weight);
            format!("V[{}, w{}]", level.short(), fmt_vec(&m))
        }
        ModuleLabel::Unit => "1".into(),
        ModuleLabel::Zero => "0".into(),
        other => other.to_string(),
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.leaves.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" . "))
    }
}

/// Parser for expressions such as `D[k] . V[k*, w(1)]` and `D[1]@k00`.
pub fn parse_expr(d: &RootDatum, text: &str) -> Result<ConvExpr> {
    let mut p = Parser { d, text, s: text.as_bytes(), i: 0 };
    p.ws();
    if p.i == p.s.len() {
        return Ok(ConvExpr::Empty);
    }
    let e = p.expr()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// A level reference: base scalar followed by shift suffixes
/// (`*` for `[0]`, a digit `n` for `[n]`, or `[n]`).
pub fn parse_levelref(d: &RootDatum, text: &str) -> Result<Level> {
    let mut p = Parser { d, text, s: text.as_bytes(), i: 0 };
    let l = p.levelref()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(l)
}

struct Parser<'a> {
    d: &'a RootDatum,
    text: &'a str,
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(self.text, self.i, msg)
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<ConvExpr> {
        let mut e = self.term()?;
        while self.peek() == Some(b'.') {
            self.i += 1;
            let t = self.term()?;
            e = ConvExpr::conv(e, t);
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<ConvExpr> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'D') | Some(b'W') => {
                let eqw = self.s[self.i] == b'W';
                self.i += 1;
                self.expect(b'[')?;
                let (level, shift) = self.cdo_body()?;
                Ok(ConvExpr::Leaf(if eqw {
                    ModuleLabel::EqW { level, shift }
                } else {
                    ModuleLabel::Cdo { level, shift }
                }))
            }
            Some(b'V') => {
                self.i += 1;
                self.expect(b'[')?;
                let level = self.levelref()?;
                self.expect(b',')?;
                self.expect(b'w')?;
                let m = self.int_tuple()?;
                self.expect(b']')?;
                if m.len() != self.d.semisimple_rank() {
                    return Err(self.err(&format!("expected {} fundamental coordinates", self.d.semisimple_rank())));
                }
                Ok(ConvExpr::Leaf(ModuleLabel::Weyl { level, weight: self.d.weight_from_fundamental(&m) }))
            }
            Some(b'1') => {
                self.i += 1;
                Ok(ConvExpr::Leaf(ModuleLabel::Unit))
            }
            Some(b'0') => {
                self.i += 1;
                Ok(ConvExpr::Leaf(ModuleLabel::Zero))
            }
            _ => Err(self.err("expected D[..], W[..], V[..] or '('")),
        }
    }

    /// `level]`, `level, n]` or `n]@levelref`.
    fn cdo_body(&mut self) -> Result<(Level, i64)> {
        let start = self.i;
        let close = self.s[start..]
            .iter()
            .position(|&c| c == b']')
            .map(|p| start + p)
            .ok_or_else(|| self.err("missing ']'"))?;
        let inner = &self.text[start..close];
        let after = {
            let mut j = close + 1;
            while j < self.s.len() && self.s[j].is_ascii_whitespace() {
                j += 1;
            }
            j
        };
        if self.s.get(after) == Some(&b'@') {
            let n: i64 = inner
                .trim()
                .parse()
                .map_err(|_| Error::parse(self.text, start, "expected an integer shift before '@'"))?;
            self.i = after + 1;
            let level = self.levelref()?;
            return Ok((level, n));
        }
        let level = self.levelref()?;
        let shift = if self.peek() == Some(b',') {
            self.i += 1;
            self.int()?
        } else {
            0
        };
        self.expect(b']')?;
        Ok((level, shift))
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let start = self.i;
        if self.s.get(self.i) == Some(&b'-') {
            self.i += 1;
        }
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        self.text[start..self.i].parse().map_err(|_| Error::parse(self.text, start, "expected an integer"))
    }

    fn int_tuple(&mut self) -> Result<Vec<i64>> {
        self.expect(b'(')?;
        let mut v = Vec::new();
        if self.peek() == Some(b')') {
            self.i += 1;
            return Ok(v);
        }
        loop {
            v.push(self.int()?);
            match self.peek() {
                Some(b',') => self.i += 1,
                Some(b')') => {
                    self.i += 1;
                    return Ok(v);
                }
                _ => return Err(self.err("expected ',' or ')'")),
            }
        }
    }

    fn levelref(&mut self) -> Result<Level> {
        self.ws();
        let start = self.i;
        let base = match self.s.get(self.i) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {
                while self.i < self.s.len() && (self.s[self.i].is_ascii_alphabetic() || self.s[self.i] == b'_') {
                    self.i += 1;
                }
                Scalar::var(&self.text[start..self.i])
            }
            Some(b'(') => {
                let mut depth = 0usize;
                while self.i < self.s.len() {
                    match self.s[self.i] {
                        b'(' => depth += 1,
                        b')' => {
                            depth -= 1;
                            if depth == 0 {
                                self.i += 1;
                                break;
                            }
                        }
                        _ => {}
                    }
                    self.i += 1;
                }
                if depth != 0 {
                    return Err(Error::parse(self.text, start, "unbalanced parenthesis"));
                }
                Scalar::parse(&self.text[start + 1..self.i - 1]).map_err(|e| match e {
                    Error::Parse { pos, msg, .. } => Error::parse(self.text, start + 1 + pos, msg),
                    other => other,
                })?
            }
            Some(c) if c.is_ascii_digit() || *c == b'-' => Scalar::from_int(self.int()?),
            _ => return Err(self.err("expected a level")),
        };
        let mut level = Level::uniform(self.d, &base);
        loop {
            let n = match self.s.get(self.i) {
                Some(b'*') => {
                    self.i += 1;
                    0
                }
                Some(c) if c.is_ascii_digit() => {
                    self.i += 1;
                    (c - b'0') as i64
                }
                Some(b'[') => {
                    self.i += 1;
                    let n = self.int()?;
                    self.expect(b']')?;
                    n
                }
                _ => break,
            };
            level = level.shifted(self.d, n).map_err(|e| Error::parse(self.text, self.i - 1, e.to_string()))?;
        }
        Ok(level)
    }
}

/// Label alphabet for property tests: every label whose tags are built from
/// the level `k` and the given shift range.
pub fn alphabet(d: &RootDatum, k: &Level, shifts: &[i64], weights: &[Vec<Q>]) -> Vec<ModuleLabel> {
    let mut out = Vec::new();
    let zero = vec![Q::zero(); d.rank()];
    for &n in shifts {
        out.push(ModuleLabel::Cdo { level: k.clone(), shift: n });
        out.push(ModuleLabel::EqW { level: k.clone(), shift: n });
    }
    for w in weights {
        out.push(ModuleLabel::Weyl { level: k.clone(), weight: w.clone() });
        out.push(ModuleLabel::Weyl { level: k.dual(d), weight: w.clone() });
        out.push(ModuleLabel::Tw { level: k.clone(), weight: w.clone(), coweight: zero.clone() });
        out.push(ModuleLabel::Tensor(vec![
            ModuleLabel::Tw { level: k.clone(), weight: w.clone(), coweight: zero.clone() },
            ModuleLabel::Weyl { level: k.dual(d), weight: d.minus_w0(w) },
        ]));
    }
    out.push(ModuleLabel::PwSum { level: k.clone(), coweight: zero.clone(), twist: zero.clone() });
    if let Some(x) = d.positive_coroot_vectors().first() {
        out.push(ModuleLabel::PwSum { level: k.clone(), coweight: x.clone(), twist: zero.clone() });
        out.push(ModuleLabel::PwSum { level: k.clone(), coweight: zero.clone(), twist: qneg(x) });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::qvec;

    fn sl2() -> RootDatum {
        RootDatum::preset("SL2").unwrap()
    }

    #[test]
    fn shifted_cdo() {
        let d = sl2();
        let e = parse_expr(&d, "D[k] . D[1]@k00").unwrap();
        assert!(check_levels(&d, &e));
        let nf = normalize(&d, &e).unwrap();
        assert_eq!(nf.render(&d), "D[k,1]");
    }

    #[test]
    fn weyl_pairing() {
        let d = sl2();
        let k = Level::generic(&d);
        let w = |l: &Level, n: i64| ModuleLabel::Weyl { level: l.clone(), weight: qvec(&[n]) };
        let e = ConvExpr::chain(vec![w(&k.dual(&d), 1), w(&k, 1)]);
        assert_eq!(normalize(&d, &e).unwrap().leaves, vec![ModuleLabel::Unit]);
        let e = ConvExpr::chain(vec![w(&k.dual(&d), 2), w(&k, 1)]);
        assert_eq!(normalize(&d, &e).unwrap().leaves, vec![ModuleLabel::Zero]);
        assert!(!check_levels(&d, &ConvExpr::chain(vec![w(&k, 1), w(&k, 1)])));
        assert!(check_levels(&d, &ConvExpr::Empty));
    }

    #[test]
    fn eqw_reduces() {
        let d = sl2();
        let e = parse_expr(&d, "W[k] . V[k, w(3)]").unwrap();
        let nf = normalize(&d, &e).unwrap();
        assert_eq!(nf.leaves[0].to_string(), "(tw k (3) (0))");
    }

    #[test]
    fn roundtrips() {
        let d = sl2();
        let k = Level::generic(&d);
        let eqw = ModuleLabel::EqW { level: k.clone(), shift: 0 };
        assert_eq!(shift_equivalence_roundtrip(&d, &eqw, 1).unwrap(), eqw);
        let tw = ModuleLabel::Tw { level: k.clone(), weight: qvec(&[2]), coweight: qvec(&[0]) };
        assert_eq!(shift_equivalence_roundtrip(&d, &tw, 1).unwrap(), tw);
        assert_eq!(shift_equivalence_roundtrip(&d, &ModuleLabel::Zero, 1).unwrap(), ModuleLabel::Zero);
    }

    #[test]
    fn parse_errors() {
        let d = sl2();
        match parse_expr(&d, "D[k] . X").unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 7),
            e => panic!("{e}"),
        }
    }
}
