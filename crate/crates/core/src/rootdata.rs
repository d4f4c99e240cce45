//! Root data of reductive groups in fixed integer coordinates.
//!
//! Characters live in `Z^n` (row vectors), cocharacters in the dual `Z^n`,
//! and the perfect pairing is the dot product. Weights and coweights are
//! rational vectors in the same coordinates.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, IMat};
use crate::linalg::{self, Mat};
use crate::poly::Q;

pub type Weight = Vec<Q>;
pub type Coweight = Vec<Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qvec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn qdot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn qadd(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn qsub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn qscale(c: &Q, a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| c * x).collect()
}

pub fn qneg(a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| -x).collect()
}

pub fn is_integral(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn to_ints(v: &[Q]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer().to_i64()).flatten())
        .collect()
}

/// Formats a rational vector as `[1, -1/2]`.
pub fn fmt_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Cartan type of a simple factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CartanType {
    pub series: char,
    pub rank: usize,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

/// Cartan matrix `A_ij = <α_i, α_j∨>` of a simple type (Bourbaki numbering).
pub fn cartan_matrix(series: char, n: usize) -> Result<IMat> {
    let bad = || Error::pre("cartan type", format!("unsupported type {series}{n}"));
    let mut a = lattice::identity(n);
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x *= 2;
        }
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match (series, n) {
        ('A', n) if n >= 1 => {
            for i in 0..n - 1 {
                link(i, i + 1, -1, -1);
            }
        }
        ('B', n) if n >= 2 => {
            for i in 0..n - 2 {
                link(i, i + 1, -1, -1);
            }
            link(n - 2, n - 1, -2, -1);
        }
        ('C', n) if n >= 2 => {
            for i in 0..n - 2 {
                link(i, i + 1, -1, -1);
            }
            link(n - 2, n - 1, -1, -2);
        }
        ('D', n) if n >= 3 => {
            for i in 0..n - 2 {
                link(i, i + 1, -1, -1);
            }
            link(n - 3, n - 1, -1, -1);
        }
        ('E', n) if (6..=8).contains(&n) => {
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            for i in 2..n - 1 {
                link(i, i + 1, -1, -1);
            }
        }
        ('F', 4) => {
            link(0, 1, -1, -1);
            link(1, 2, -2, -1);
            link(2, 3, -1, -1);
        }
        ('G', 2) => link(0, 1, -1, -3),
        _ => return Err(bad()),
    }
    Ok(a)
}

/// On-disk datum description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumFile {
    #[serde(default)]
    pub name: Option<String>,
    pub rank: usize,
    #[serde(default)]
    pub simple_roots: Vec<Vec<i64>>,
    #[serde(default)]
    pub simple_coroots: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    name: String,
    rank: usize,
    roots: IMat,
    coroots: IMat,
    cartan: IMat,
    cartan_inv: Mat<Q>,
    components: Vec<Vec<usize>>,
    types: Vec<CartanType>,
    d: Vec<Q>,
    pos: Vec<Vec<i64>>,
    pos_co: Vec<Vec<i64>>,
    center: IMat,
    coord_inv: Mat<Q>,
    w0: Vec<usize>,
}

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_form() == other.canonical_form()
    }
}

impl RootDatum {
    /// Builds and validates a datum from simple roots and coroots.
    pub fn new(name: &str, rank: usize, roots: IMat, coroots: IMat) -> Result<Self> {
        let p = roots.len();
        if coroots.len() != p {
            return Err(Error::pre("datum", "root and coroot counts differ"));
        }
        if p > rank {
            return Err(Error::pre("datum", "more simple roots than the rank"));
        }
        if roots.iter().chain(&coroots).any(|v| v.len() != rank) {
            return Err(Error::pre("datum", "vector length differs from the rank"));
        }
        let cartan: IMat = (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| roots[i].iter().zip(&coroots[j]).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        for i in 0..p {
            if cartan[i][i] != 2 {
                return Err(Error::pre("cartan", format!("<α_{i}, α_{i}∨> = {}", cartan[i][i])));
            }
            for j in 0..p {
                if i != j && (cartan[i][j] > 0 || (cartan[i][j] == 0) != (cartan[j][i] == 0)) {
                    return Err(Error::pre("cartan", format!("bad off-diagonal entry ({i},{j})")));
                }
            }
        }
        let components = connected_components(&cartan);
        let d = symmetrizer(&cartan, &components)?;
        let sym: Mat<Q> = (0..p)
            .map(|i| (0..p).map(|j| q(cartan[i][j]) * &d[j]).collect())
            .collect();
        for m in 1..=p {
            let minor: Mat<Q> = sym[..m].iter().map(|r| r[..m].to_vec()).collect();
            if !linalg::det(&minor).is_positive() {
                return Err(Error::pre("cartan", "symmetrization is not positive definite"));
            }
        }
        let types = components
            .iter()
            .map(|c| classify(&cartan, c, &d))
            .collect::<Result<Vec<_>>>()?;
        let cartan_inv = linalg::inverse(&linalg::to_q(&cartan)).expect("positive definite");
        let center = if p == 0 {
            lattice::identity(rank)
        } else {
            lattice::hnf_basis(&lattice::kernel(&roots, rank), rank)
        };
        let mut coords = coroots.clone();
        coords.extend(center.iter().cloned());
        let coord_inv = linalg::inverse(&linalg::to_q(&coords)).expect("complementary");
        let mut dat = RootDatum {
            name: name.to_string(),
            rank,
            roots,
            coroots,
            cartan,
            cartan_inv,
            components,
            types,
            d,
            pos: Vec::new(),
            pos_co: Vec::new(),
            center,
            coord_inv,
            w0: Vec::new(),
        };
        dat.pos = dat.enumerate_positive_roots();
        dat.pos_co = dat.pos.iter().map(|c| dat.coroot_coeffs(c)).collect();
        dat.w0 = dat.longest_word();
        Ok(dat)
    }

    pub fn from_file(f: &DatumFile) -> Result<Self> {
        Self::new(
            f.name.as_deref().unwrap_or("custom"),
            f.rank,
            f.simple_roots.clone(),
            f.simple_coroots.clone(),
        )
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let f: DatumFile = toml::from_str(text).map_err(|e| {
            let pos = e.span().map(|s| s.start).unwrap_or(0);
            Error::parse(text, pos, e.message().to_string())
        })?;
        Self::from_file(&f)
    }

    pub fn to_file(&self) -> DatumFile {
        DatumFile {
            name: Some(self.name.clone()),
            rank: self.rank,
            simple_roots: self.roots.clone(),
            simple_coroots: self.coroots.clone(),
        }
    }

    /// Simply connected datum of a Cartan matrix: `X* = P`.
    pub fn simply_connected(name: &str, cartan: &IMat) -> Result<Self> {
        let p = cartan.len();
        Self::new(name, p, cartan.clone(), lattice::identity(p))
    }

    /// Adjoint datum of a Cartan matrix: `X* = Q`.
    pub fn adjoint(name: &str, cartan: &IMat) -> Result<Self> {
        let p = cartan.len();
        Self::new(name, p, lattice::identity(p), lattice::transpose(cartan, p))
    }

    pub fn torus(r: usize) -> Self {
        Self::new(&format!("Torus({r})"), r, Vec::new(), Vec::new()).expect("torus")
    }

    pub fn gl(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::pre("preset", "GL(0)"));
        }
        let v: IMat = (0..n - 1)
            .map(|i| (0..n).map(|j| if j == i { 1 } else if j == i + 1 { -1 } else { 0 }).collect())
            .collect();
        Self::new(&format!("GL({n})"), n, v.clone(), v)
    }

    /// Catalog lookup. Accepts `Torus(r)`, `SL2`, `PSL2`, `SL(n)`, `PGL(n)`,
    /// `GL(n)`, `Spin(D_n)`, `SpinAdj(D_n)`, `SC(X_n)` and `Adj(X_n)`.
    pub fn preset(name: &str) -> Result<Self> {
        let s: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        let unknown = || Error::pre("preset", format!("unknown preset {name:?}"));
        let (head, arg) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], Some(&s[i + 1..s.len() - 1])),
            Some(_) => return Err(unknown()),
            None => {
                let i = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
                (&s[..i], (i < s.len()).then(|| &s[i..]))
            }
        };
        let num = |a: Option<&str>| -> Result<usize> {
            a.and_then(|x| x.parse::<usize>().ok())
                .filter(|&n| n > 0)
                .ok_or_else(unknown)
        };
        let typ = |a: Option<&str>| -> Result<(char, usize)> {
            let a = a.ok_or_else(unknown)?;
            let mut cs = a.chars();
            let series = cs.next().ok_or_else(unknown)?.to_ascii_uppercase();
            let rest: String = cs.filter(|&c| c != '_').collect();
            let n = rest.parse::<usize>().map_err(|_| unknown())?;
            Ok((series, n))
        };
        match head.to_ascii_uppercase().as_str() {
            "TORUS" | "T" => Ok(Self::torus(num(arg)?)),
            "SL" => {
                let n = num(arg)?;
                if n < 2 {
                    return Err(unknown());
                }
                let nm = if n == 2 { "SL2".into() } else { format!("SL({n})") };
                Self::simply_connected(&nm, &cartan_matrix('A', n - 1)?)
            }
            "PSL" | "PGL" => {
                let n = num(arg)?;
                if n < 2 {
                    return Err(unknown());
                }
                let nm = if n == 2 && head.eq_ignore_ascii_case("PSL") {
                    "PSL2".into()
                } else {
                    format!("PGL({n})")
                };
                Self::adjoint(&nm, &cartan_matrix('A', n - 1)?)
            }
            "GL" => Self::gl(num(arg)?),
            "SPIN" => {
                let (series, n) = typ(arg)?;
                if series != 'D' {
                    return Err(unknown());
                }
                Self::simply_connected(&format!("Spin(D{n})"), &cartan_matrix('D', n)?)
            }
            "SPINADJ" => {
                let (series, n) = typ(arg)?;
                if series != 'D' {
                    return Err(unknown());
                }
                Self::adjoint(&format!("SpinAdj(D{n})"), &cartan_matrix('D', n)?)
            }
            "SC" => {
                let (series, n) = typ(arg)?;
                Self::simply_connected(&format!("SC({series}{n})"), &cartan_matrix(series, n)?)
            }
            "ADJ" => {
                let (series, n) = typ(arg)?;
                Self::adjoint(&format!("Adj({series}{n})"), &cartan_matrix(series, n)?)
            }
            _ => Err(unknown()),
        }
    }

    /// Langlands dual: swap roots and coroots.
    pub fn dual(&self) -> Self {
        let name = if self.name.starts_with("dual(") {
            self.name[5..self.name.len() - 1].to_string()
        } else {
            format!("dual({})", self.name)
        };
        Self::new(&name, self.rank, self.coroots.clone(), self.roots.clone()).expect("dual of a valid datum")
    }

    /// Hermite-normalized roots with correspondingly transformed coroots.
    pub fn canonical_form(&self) -> (IMat, IMat) {
        let n = self.rank;
        if self.roots.is_empty() {
            return (Vec::new(), Vec::new());
        }
        let r = lattice::transpose(&self.roots, n);
        let c = lattice::transpose(&self.coroots, n);
        let (h, u) = lattice::hnf_with_transform(&r, self.roots.len());
        let uit = lattice::transpose(&lattice::unimodular_inverse(&u), n);
        let c2 = lattice::mat_mul(&uit, &c, n, self.roots.len());
        (h, c2)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn semisimple_rank(&self) -> usize {
        self.roots.len()
    }

    pub fn simple_roots(&self) -> &IMat {
        &self.roots
    }

    pub fn simple_coroots(&self) -> &IMat {
        &self.coroots
    }

    pub fn cartan(&self) -> &IMat {
        &self.cartan
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_types(&self) -> &[CartanType] {
        &self.types
    }

    /// Basis of the cocharacters killed by every root.
    pub fn center_basis(&self) -> &IMat {
        &self.center
    }

    pub fn center_rank(&self) -> usize {
        self.rank - self.roots.len()
    }

    pub fn is_torus(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn is_semisimple(&self) -> bool {
        self.roots.len() == self.rank
    }

    pub fn is_simple(&self) -> bool {
        self.components.len() == 1 && self.is_semisimple()
    }

    pub fn is_simply_laced(&self) -> bool {
        self.d.iter().all(|x| x.is_one())
    }

    /// `X* = Q`.
    pub fn is_adjoint(&self) -> bool {
        self.is_semisimple() && linalg::det(&linalg::to_q(&self.roots)).abs().is_one()
    }

    /// `X* = P`.
    pub fn is_simply_connected(&self) -> bool {
        self.is_semisimple() && linalg::det(&linalg::to_q(&self.coroots)).abs().is_one()
    }

    /// Index `|P/X*|` and `|X*/Q|` for semisimple data, via Smith normal form.
    pub fn lattice_indices(&self) -> Option<(i64, i64)> {
        if !self.is_semisimple() {
            return None;
        }
        let p = self.rank;
        let x_over_q: i64 = lattice::invariant_factors(&self.roots, p).iter().product();
        let p_over_x: i64 = lattice::invariant_factors(&self.coroots, p).iter().product();
        Some((p_over_x, x_over_q))
    }

    /// `(α_i, α_i)/2` with long roots normalized to 1.
    pub fn root_length_ratios(&self) -> &[Q] {
        &self.d
    }

    pub fn pairing(&self, lambda: &[Q], gamma: &[Q]) -> Result<Q> {
        if lambda.len() != self.rank || gamma.len() != self.rank {
            return Err(Error::pre("datum mismatch", "vector length differs from the rank"));
        }
        Ok(qdot(lambda, gamma))
    }

    pub fn root_vector(&self, coeffs: &[i64]) -> Weight {
        let mut v = vec![Q::zero(); self.rank];
        for (c, r) in coeffs.iter().zip(&self.roots) {
            for (x, y) in v.iter_mut().zip(r) {
                *x += q(c * y);
            }
        }
        v
    }

    pub fn coroot_vector(&self, coeffs: &[i64]) -> Coweight {
        let mut v = vec![Q::zero(); self.rank];
        for (c, r) in coeffs.iter().zip(&self.coroots) {
            for (x, y) in v.iter_mut().zip(r) {
                *x += q(c * y);
            }
        }
        v
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        qvec(&self.roots[i])
    }

    pub fn simple_coroot(&self, i: usize) -> Coweight {
        qvec(&self.coroots[i])
    }

    /// `⟨λ, α_i∨⟩` for each simple coroot.
    pub fn fundamental_coords(&self, lambda: &[Q]) -> Vec<Q> {
        self.coroots.iter().map(|c| qdot(lambda, &qvec(c))).collect()
    }

    /// `⟨λ, z_b⟩` for the center basis.
    pub fn central_coords(&self, lambda: &[Q]) -> Vec<Q> {
        self.center.iter().map(|z| qdot(lambda, &qvec(z))).collect()
    }

    /// `⟨α_i, x⟩` for each simple root.
    pub fn root_coords(&self, x: &[Q]) -> Vec<Q> {
        self.roots.iter().map(|r| qdot(&qvec(r), x)).collect()
    }

    /// Inverse of `(fundamental_coords, central_coords)`.
    pub fn weight_from_coords(&self, m: &[Q], c: &[Q]) -> Weight {
        let mut rhs = m.to_vec();
        rhs.extend(c.iter().cloned());
        linalg::mat_vec(&self.coord_inv, &rhs)
    }

    pub fn fundamental_weight(&self, i: usize) -> Weight {
        let p = self.semisimple_rank();
        let m: Vec<Q> = (0..p).map(|j| q(i64::from(i == j))).collect();
        self.weight_from_coords(&m, &vec![Q::zero(); self.center_rank()])
    }

    pub fn weight_from_fundamental(&self, m: &[i64]) -> Weight {
        self.weight_from_coords(&qvec(m), &vec![Q::zero(); self.center_rank()])
    }

    /// Projection of a coweight onto the span of the coroots, as coefficients
    /// in the simple coroots, and its central part in the center basis.
    pub fn split_coweight(&self, x: &[Q]) -> (Vec<Q>, Vec<Q>) {
        let mut basis: IMat = self.coroots.clone();
        basis.extend(self.center.iter().cloned());
        let bt = linalg::transpose(&linalg::to_q(&basis));
        let coeffs = linalg::solve(&bt, x).expect("basis of h");
        let p = self.semisimple_rank();
        (coeffs[..p].to_vec(), coeffs[p..].to_vec())
    }

    pub fn is_dominant(&self, lambda: &[Q]) -> bool {
        self.fundamental_coords(lambda).iter().all(|x| !x.is_negative())
    }

    pub fn is_dominant_coweight(&self, x: &[Q]) -> bool {
        self.root_coords(x).iter().all(|v| !v.is_negative())
    }

    /// Lies in `X*(T)`.
    pub fn in_character_lattice(&self, lambda: &[Q]) -> bool {
        is_integral(lambda)
    }

    /// Lies in `P`: integral against every coroot.
    pub fn in_weight_lattice(&self, lambda: &[Q]) -> bool {
        is_integral(&self.fundamental_coords(lambda))
    }

    /// Lies in `P̌`: integral against every root.
    pub fn in_coweight_lattice(&self, x: &[Q]) -> bool {
        is_integral(&self.root_coords(x))
    }

    /// Lies in the root lattice `Q`.
    pub fn in_root_lattice(&self, lambda: &[Q]) -> bool {
        if self.roots.is_empty() {
            return lambda.iter().all(Zero::is_zero);
        }
        let a = linalg::transpose(&linalg::to_q(&self.roots));
        match linalg::solve(&a, lambda) {
            Some(c) => is_integral(&c) && linalg::mat_vec(&a, &c) == lambda,
            None => false,
        }
    }

    pub fn reflect(&self, i: usize, lambda: &[Q]) -> Weight {
        let m = qdot(lambda, &qvec(&self.coroots[i]));
        qsub(lambda, &qscale(&m, &qvec(&self.roots[i])))
    }

    pub fn reflect_coweight(&self, i: usize, x: &[Q]) -> Coweight {
        let m = qdot(&qvec(&self.roots[i]), x);
        qsub(x, &qscale(&m, &qvec(&self.coroots[i])))
    }

    pub fn weyl_orbit(&self, lambda: &[Q]) -> BTreeSet<Weight> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(lambda.to_vec());
        queue.push_back(lambda.to_vec());
        while let Some(v) = queue.pop_front() {
            for i in 0..self.semisimple_rank() {
                let w = self.reflect(i, &v);
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Dominant representative of the Weyl orbit.
    pub fn to_dominant(&self, lambda: &[Q]) -> Weight {
        let mut v = lambda.to_vec();
        while let Some(i) = self.fundamental_coords(&v).iter().position(|x| x.is_negative()) {
            v = self.reflect(i, &v);
        }
        v
    }

    fn longest_word(&self) -> Vec<usize> {
        let mut v = self.rho();
        let mut word = Vec::new();
        while let Some(i) = self.fundamental_coords(&v).iter().position(|x| x.is_positive()) {
            v = self.reflect(i, &v);
            word.push(i);
        }
        word
    }

    /// Reduced word of the longest Weyl group element.
    pub fn longest_element(&self) -> &[usize] {
        &self.w0
    }

    pub fn w0(&self, lambda: &[Q]) -> Weight {
        self.w0.iter().fold(lambda.to_vec(), |v, &i| self.reflect(i, &v))
    }

    pub fn minus_w0(&self, lambda: &[Q]) -> Weight {
        qneg(&self.w0(lambda))
    }

    /// Transpose action of `w0` on coweights.
    pub fn w0_coweight(&self, x: &[Q]) -> Coweight {
        self.w0.iter().fold(x.to_vec(), |v, &i| self.reflect_coweight(i, &v))
    }

    pub fn weyl_group_order(&self) -> u64 {
        self.types
            .iter()
            .map(|t| {
                let n = t.rank as u64;
                let fact = |k: u64| (1..=k).product::<u64>();
                match t.series {
                    'A' => fact(n + 1),
                    'B' | 'C' => (1u64 << n) * fact(n),
                    'D' => (1u64 << (n - 1)) * fact(n),
                    'E' => [51_840, 2_903_040, 696_729_600][t.rank - 6],
                    'F' => 1152,
                    _ => 12,
                }
            })
            .product()
    }

    fn enumerate_positive_roots(&self) -> Vec<Vec<i64>> {
        let p = self.semisimple_rank();
        let mut all: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut layer: Vec<Vec<i64>> = (0..p)
            .map(|i| (0..p).map(|j| i64::from(i == j)).collect())
            .collect();
        all.extend(layer.iter().cloned());
        while !layer.is_empty() {
            let mut next = BTreeSet::new();
            for beta in &layer {
                for j in 0..p {
                    let pair: i64 = (0..p).map(|i| beta[i] * self.cartan[i][j]).sum();
                    let mut r = 0;
                    let mut down = beta.clone();
                    loop {
                        down[j] -= 1;
                        if all.contains(&down) {
                            r += 1;
                        } else {
                            break;
                        }
                    }
                    if r - pair > 0 {
                        let mut up = beta.clone();
                        up[j] += 1;
                        next.insert(up);
                    }
                }
            }
            all.extend(next.iter().cloned());
            layer = next.into_iter().collect();
        }
        let mut v: Vec<Vec<i64>> = all.into_iter().collect();
        v.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        v
    }

    fn coroot_coeffs(&self, c: &[i64]) -> Vec<i64> {
        let p = self.semisimple_rank();
        let mut len = Q::zero();
        for i in 0..p {
            for j in 0..p {
                len += q(c[i] * c[j] * self.cartan[i][j]) * &self.d[j];
            }
        }
        let d_beta = len / q(2);
        (0..p)
            .map(|i| {
                let x = q(c[i]) * &self.d[i] / &d_beta;
                x.to_integer().to_i64().expect("integral coroot")
            })
            .collect()
    }

    /// Positive roots as coefficient vectors in the simple roots, ordered by
    /// height.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.pos
    }

    /// Coroots of [`positive_roots`](Self::positive_roots) in simple-coroot
    /// coefficients.
    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.pos_co
    }

    pub fn positive_root_vectors(&self) -> Vec<Weight> {
        self.pos.iter().map(|c| self.root_vector(c)).collect()
    }

    pub fn positive_coroot_vectors(&self) -> Vec<Coweight> {
        self.pos_co.iter().map(|c| self.coroot_vector(c)).collect()
    }

    pub fn num_roots(&self) -> usize {
        2 * self.pos.len()
    }

    /// Weights of the adjoint representation with multiplicity.
    pub fn adjoint_weights(&self) -> Vec<Weight> {
        let mut v = Vec::new();
        for r in self.positive_root_vectors() {
            v.push(qneg(&r));
            v.push(r);
        }
        for _ in 0..self.rank {
            v.push(vec![Q::zero(); self.rank]);
        }
        v
    }

    pub fn rho(&self) -> Weight {
        let mut s = vec![Q::zero(); self.rank];
        for r in self.positive_root_vectors() {
            s = qadd(&s, &r);
        }
        qscale(&Q::new(1.into(), 2.into()), &s)
    }

    pub fn rho_check(&self) -> Coweight {
        let mut s = vec![Q::zero(); self.rank];
        for r in self.positive_coroot_vectors() {
            s = qadd(&s, &r);
        }
        qscale(&Q::new(1.into(), 2.into()), &s)
    }

    /// Height `⟨λ, ρ̌⟩`.
    pub fn height(&self, lambda: &[Q]) -> Q {
        qdot(lambda, &self.rho_check())
    }

    /// Height `⟨ρ, x⟩` of a coweight.
    pub fn coweight_height(&self, x: &[Q]) -> Q {
        qdot(&self.rho(), x)
    }

    /// Index into [`positive_roots`](Self::positive_roots) of the highest root
    /// of each simple factor.
    pub fn highest_root_indices(&self) -> Vec<usize> {
        self.components
            .iter()
            .map(|comp| {
                (0..self.pos.len())
                    .filter(|&k| self.pos[k].iter().enumerate().all(|(i, &c)| c == 0 || comp.contains(&i)))
                    .max_by_key(|&k| self.pos[k].iter().sum::<i64>())
                    .expect("component has roots")
            })
            .collect()
    }

    pub fn highest_root(&self) -> Result<Weight> {
        match self.components.len() {
            0 => Err(Error::pre("no roots", "the datum is a torus")),
            1 => Ok(self.root_vector(&self.pos[self.highest_root_indices()[0]])),
            _ => Err(Error::pre("not simple", "several simple factors; use highest_root_of")),
        }
    }

    pub fn highest_root_of(&self, s: usize) -> Weight {
        self.root_vector(&self.pos[self.highest_root_indices()[s]])
    }

    /// Coroot `θ_s∨` of the highest root of factor `s`.
    pub fn highest_coroot_of(&self, s: usize) -> Coweight {
        self.coroot_vector(&self.pos_co[self.highest_root_indices()[s]])
    }

    /// `1 + ⟨ρ_s, θ_s∨⟩`.
    pub fn dual_coxeter(&self, s: usize) -> Result<i64> {
        if s >= self.components.len() {
            return Err(Error::pre("simple factor", format!("no simple factor {s}")));
        }
        let theta_c = &self.pos_co[self.highest_root_indices()[s]];
        let comp = &self.components[s];
        Ok(1 + comp.iter().map(|&i| theta_c[i]).sum::<i64>())
    }

    /// Semisimple coefficients `c` with `λ|ss = Σ c_i α_i`.
    pub fn root_coefficients(&self, lambda: &[Q]) -> Vec<Q> {
        let m = self.fundamental_coords(lambda);
        let p = self.semisimple_rank();
        (0..p)
            .map(|k| (0..p).map(|i| &m[i] * &self.cartan_inv[i][k]).sum())
            .collect()
    }

    /// Normalized invariant form on weights restricted to the simple factors in
    /// `comps` (long roots have squared length 2).
    pub fn form_on(&self, comps: &[usize], lambda: &[Q], mu: &[Q]) -> Q {
        let c = self.root_coefficients(lambda);
        let m = self.fundamental_coords(mu);
        comps
            .iter()
            .flat_map(|&s| self.components[s].iter())
            .map(|&k| &c[k] * &self.d[k] * &m[k])
            .sum()
    }

    pub fn form(&self, lambda: &[Q], mu: &[Q]) -> Q {
        let all: Vec<usize> = (0..self.components.len()).collect();
        self.form_on(&all, lambda, mu)
    }

    /// Normalized invariant form on coweights restricted to factor `s`.
    pub fn coweight_form_on(&self, s: usize, x: &[Q], y: &[Q]) -> Q {
        let (a, _) = self.split_coweight(x);
        let (b, _) = self.split_coweight(y);
        let comp = &self.components[s];
        let mut t = Q::zero();
        for &i in comp {
            for &j in comp {
                t += &a[i] * &b[j] * q(self.cartan[i][j]) / &self.d[i];
            }
        }
        t
    }

    /// `(λ_s, λ_s + 2ρ_s)` on factor `s`.
    pub fn casimir(&self, s: usize, lambda: &[Q]) -> Q {
        let two_rho = qscale(&q(2), &self.rho());
        self.form_on(&[s], lambda, &qadd(lambda, &two_rho))
    }

    pub fn weyl_dimension(&self, lambda: &[Q]) -> Result<u64> {
        if !self.in_weight_lattice(lambda) || !self.is_dominant(lambda) {
            return Err(Error::pre("dominant integral", format!("{} is not dominant integral", fmt_vec(lambda))));
        }
        let lr = qadd(lambda, &self.rho());
        let rho = self.rho();
        let mut num = Q::one();
        for co in self.positive_coroot_vectors() {
            num *= qdot(&lr, &co) / qdot(&rho, &co);
        }
        Ok(num.to_integer().to_u64().expect("dimension fits"))
    }

    /// Height of each fundamental weight.
    fn fundamental_heights(&self) -> Vec<Q> {
        (0..self.semisimple_rank())
            .map(|i| self.height(&self.fundamental_weight(i)))
            .collect()
    }

    /// Dominant characters of height at most `cutoff` with central
    /// coordinates in `[-cutoff, cutoff]`, ordered by height then
    /// lexicographically in fundamental coordinates.
    pub fn dominant_weights(&self, cutoff: i64) -> Vec<Weight> {
        self.dominant_in(cutoff, true)
    }

    /// Dominant elements of `P` (no central part) up to height `cutoff`.
    pub fn dominant_p_weights(&self, cutoff: i64) -> Vec<Weight> {
        self.dominant_in(cutoff, false)
    }

    fn dominant_in(&self, cutoff: i64, character: bool) -> Vec<Weight> {
        let hts = self.fundamental_heights();
        let p = hts.len();
        let mut ms: Vec<Vec<i64>> = Vec::new();
        let mut cur = vec![0i64; p];
        fn rec(i: usize, budget: Q, hts: &[Q], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if i == hts.len() {
                out.push(cur.clone());
                return;
            }
            let mut b = budget;
            cur[i] = 0;
            while !b.is_negative() {
                rec(i + 1, b.clone(), hts, cur, out);
                cur[i] += 1;
                b -= &hts[i];
            }
            cur[i] = 0;
        }
        rec(0, q(cutoff), &hts, &mut cur, &mut ms);
        let zr = self.center_rank();
        let centrals: Vec<Vec<i64>> = if character {
            let mut v = vec![Vec::new()];
            for _ in 0..zr {
                v = v
                    .into_iter()
                    .flat_map(|c| {
                        (-cutoff..=cutoff).map(move |x| {
                            let mut c2 = c.clone();
                            c2.push(x);
                            c2
                        })
                    })
                    .collect();
            }
            v
        } else {
            vec![vec![0; zr]]
        };
        let mut out: Vec<(Q, Vec<i64>, Vec<i64>, Weight)> = Vec::new();
        for m in &ms {
            for c in &centrals {
                let w = self.weight_from_coords(&qvec(m), &qvec(c));
                if character && !is_integral(&w) {
                    continue;
                }
                out.push((self.height(&w), m.clone(), c.clone(), w));
            }
        }
        out.sort();
        out.into_iter().map(|t| t.3).collect()
    }

    /// `{0}` together with the fundamental weights `ϖ_i` with `⟨ϖ_i, θ∨⟩ = 1`.
    pub fn p1_plus(&self) -> Vec<Weight> {
        let mut choices: Vec<Vec<Option<usize>>> = Vec::new();
        for s in 0..self.components.len() {
            let th = &self.pos_co[self.highest_root_indices()[s]];
            let mut c = vec![None];
            c.extend(self.components[s].iter().filter(|&&i| th[i] == 1).map(|&i| Some(i)));
            choices.push(c);
        }
        let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
        for c in &choices {
            combos = combos
                .into_iter()
                .flat_map(|base| {
                    c.iter().map(move |x| {
                        let mut b = base.clone();
                        b.extend(x.iter().copied());
                        b
                    })
                })
                .collect();
        }
        let mut out: Vec<Weight> = combos
            .into_iter()
            .map(|idx| {
                let mut m = vec![0i64; self.semisimple_rank()];
                for i in idx {
                    m[i] = 1;
                }
                self.weight_from_fundamental(&m)
            })
            .collect();
        out.sort_by(|a, b| self.height(a).cmp(&self.height(b)).then_with(|| self.fundamental_coords(b).cmp(&self.fundamental_coords(a))));
        out
    }

    /// The unique `λ ∈ P¹₊` with `μ + λ` in the root lattice.
    pub fn minuscule_match(&self, mu: &[Q]) -> Result<Weight> {
        if !self.is_dominant(mu) || !self.in_weight_lattice(mu) {
            return Err(Error::pre("dominant integral", format!("{} is not dominant integral", fmt_vec(mu))));
        }
        let hits: Vec<Weight> = self
            .p1_plus()
            .into_iter()
            .filter(|l| self.in_root_lattice(&qadd(mu, l)))
            .collect();
        match hits.len() {
            1 => Ok(hits.into_iter().next().expect("one")),
            0 => Err(Error::pre("minuscule match", format!("no element of P1+ matches {}", fmt_vec(mu)))),
            _ => Err(Error::pre("minuscule match", format!("several elements of P1+ match {}", fmt_vec(mu)))),
        }
    }

    /// Dimension of `G`.
    pub fn dimension(&self) -> usize {
        self.rank + self.num_roots()
    }
}

impl fmt::Display for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name: {}", self.name)?;
        writeln!(f, "rank: {}", self.rank)?;
        writeln!(f, "semisimple rank: {}", self.semisimple_rank())?;
        let ty: Vec<String> = self.types.iter().map(|t| t.to_string()).collect();
        writeln!(f, "type: {}", if ty.is_empty() { "torus".to_string() } else { ty.join(" x ") })?;
        writeln!(f, "simple roots: {:?}", self.roots)?;
        writeln!(f, "simple coroots: {:?}", self.coroots)?;
        writeln!(f, "cartan: {:?}", self.cartan)?;
        writeln!(f, "positive roots: {}", self.pos.len())?;
        write!(f, "center basis: {:?}", self.center)
    }
}

fn connected_components(a: &IMat) -> Vec<Vec<usize>> {
    let p = a.len();
    let mut seen = vec![false; p];
    let mut out = Vec::new();
    for s in 0..p {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..p {
                if !seen[j] && a[i][j] != 0 {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn symmetrizer(a: &IMat, comps: &[Vec<usize>]) -> Result<Vec<Q>> {
    let p = a.len();
    let mut d: Vec<Option<Q>> = vec![None; p];
    for comp in comps {
        d[comp[0]] = Some(Q::one());
        let mut stack = vec![comp[0]];
        while let Some(i) = stack.pop() {
            let di = d[i].clone().expect("set");
            for &j in comp {
                if j != i && a[i][j] != 0 {
                    // a_ij d_j = a_ji d_i
                    let dj = &di * q(a[j][i]) / q(a[i][j]);
                    match &d[j] {
                        Some(x) if *x != dj => {
                            return Err(Error::pre("cartan", "matrix is not symmetrizable"));
                        }
                        Some(_) => {}
                        None => {
                            d[j] = Some(dj);
                            stack.push(j);
                        }
                    }
                }
            }
        }
        let mx = comp.iter().map(|&i| d[i].clone().expect("set")).max().expect("nonempty");
        for &i in comp {
            d[i] = d[i].take().map(|x| x / &mx);
        }
    }
    Ok(d.into_iter().map(|x| x.expect("set")).collect())
}

fn classify(a: &IMat, comp: &[usize], d: &[Q]) -> Result<CartanType> {
    let m = comp.len();
    let mut degree = vec![0usize; m];
    let mut mult_bond = 0i64;
    let mut edges = Vec::new();
    for (x, &i) in comp.iter().enumerate() {
        for (y, &j) in comp.iter().enumerate() {
            if x < y && a[i][j] != 0 {
                degree[x] += 1;
                degree[y] += 1;
                edges.push((x, y));
                mult_bond = mult_bond.max(a[i][j] * a[j][i]);
            }
        }
    }
    if edges.len() + 1 != m {
        return Err(Error::pre("cartan", "Dynkin diagram is not a tree"));
    }
    let t = |s: char| Ok(CartanType { series: s, rank: m });
    match mult_bond {
        0 | 1 => {
            let branch: Vec<usize> = (0..m).filter(|&x| degree[x] >= 3).collect();
            if branch.is_empty() {
                return t('A');
            }
            let b = branch[0];
            let mut arms: Vec<usize> = edges
                .iter()
                .filter_map(|&(x, y)| if x == b { Some(y) } else if y == b { Some(x) } else { None })
                .map(|start| {
                    let mut len = 1;
                    let (mut prev, mut cur) = (b, start);
                    loop {
                        let nxt = edges.iter().find_map(|&(x, y)| {
                            if x == cur && y != prev {
                                Some(y)
                            } else if y == cur && x != prev {
                                Some(x)
                            } else {
                                None
                            }
                        });
                        match nxt {
                            Some(n) => {
                                prev = cur;
                                cur = n;
                                len += 1;
                            }
                            None => break len,
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => t('D'),
                [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => t('E'),
                _ => Err(Error::pre("cartan", "not of finite type")),
            }
        }
        2 => {
            if m == 2 {
                return t('B');
            }
            let short = comp.iter().filter(|&&i| !d[i].is_one()).count();
            if m == 4 && short == 2 {
                return t('F');
            }
            if short == 1 {
                t('B')
            } else {
                t('C')
            }
        }
        3 => t('G'),
        _ => Err(Error::pre("cartan", "not of finite type")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_basics() {
        let d = RootDatum::preset("SL2").unwrap();
        assert_eq!(d.cartan(), &vec![vec![2]]);
        assert!(d.is_simply_connected());
        assert_eq!(d.rho(), d.fundamental_weight(0));
        assert_eq!(d.highest_root().unwrap(), d.simple_root(0));
        assert_eq!(d.dual_coxeter(0).unwrap(), 2);
    }

    #[test]
    fn root_counts() {
        for (name, n) in [("SL(3)", 3), ("SC(B3)", 9), ("SC(C3)", 9), ("Spin(D4)", 12), ("SC(G2)", 6), ("SC(F4)", 24), ("SC(E6)", 36)] {
            assert_eq!(RootDatum::preset(name).unwrap().positive_roots().len(), n, "{name}");
        }
    }

    #[test]
    fn types_are_recognized() {
        for name in ["SC(B3)", "SC(C4)", "Spin(D5)", "SC(E7)", "SC(F4)", "SC(G2)"] {
            let d = RootDatum::preset(name).unwrap();
            let t = d.component_types()[0].to_string();
            assert!(name.contains(&t), "{name} vs {t}");
        }
    }

    #[test]
    fn dual_coxeter_numbers() {
        for (name, h) in [("SC(B3)", 5), ("SC(C3)", 4), ("SC(G2)", 4), ("SC(F4)", 9), ("SC(E8)", 30)] {
            assert_eq!(RootDatum::preset(name).unwrap().dual_coxeter(0).unwrap(), h, "{name}");
        }
    }

    #[test]
    fn gl_center() {
        let d = RootDatum::preset("GL(3)").unwrap();
        assert_eq!(d.center_basis(), &vec![vec![1, 1, 1]]);
        assert!(!d.is_semisimple());
    }

    #[test]
    fn invalid_data_rejected() {
        assert!(RootDatum::new("x", 1, vec![vec![1]], vec![vec![1]]).is_err());
        assert!(RootDatum::new("x", 2, vec![vec![2, -3], vec![-3, 2]], lattice::identity(2)).is_err());
        assert!(RootDatum::preset("Foo(3)").is_err());
    }
}
