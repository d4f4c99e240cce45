//! Dense linear algebra over exact fields.

use crate::poly::Q;
use crate::scalar::Scalar;
use num_traits::{One, Zero};

pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Division by a nonzero element.
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self.checked_div(o).expect("division by zero")
    }
    fn neg(&self) -> Self {
        -self
    }
}

pub type Mat<F> = Vec<Vec<F>>;

pub fn identity<F: Field>(n: usize) -> Mat<F> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect()
}

pub fn transpose<F: Field>(m: &Mat<F>) -> Mat<F> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mat_mul<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    let cols = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| {
                    r.iter()
                        .zip(b.iter())
                        .fold(F::zero(), |acc, (x, brow)| acc.add(&x.mul(&brow[j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(a: &Mat<F>, v: &[F]) -> Vec<F> {
    a.iter().map(|r| dot(r, v)).collect()
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Field>(m: &Mat<F>) -> (Mat<F>, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = F::one().div(&a[r][c]);
        for x in a[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = a[r][j].mul(&f);
                    a[i][j] = a[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<F: Field>(m: &Mat<F>) -> usize {
    rref(m).1.len()
}

pub fn det<F: Field>(m: &Mat<F>) -> F {
    let n = m.len();
    let mut a = m.clone();
    let mut d = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return F::zero();
        };
        if p != c {
            a.swap(p, c);
            d = d.neg();
        }
        d = d.mul(&a[c][c]);
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = a[i][c].div(&a[c][c]);
                for j in c..n {
                    let t = a[c][j].mul(&f);
                    a[i][j] = a[i][j].sub(&t);
                }
            }
        }
    }
    d
}

pub fn inverse<F: Field>(m: &Mat<F>) -> Option<Mat<F>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let aug: Mat<F> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            row
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Some solution of `a x = b`, if one exists.
pub fn solve<F: Field>(a: &Mat<F>, b: &[F]) -> Option<Vec<F>> {
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let aug: Mat<F> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut row = r.clone();
            row.push(x.clone());
            row
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = red[i][cols].clone();
    }
    Some(x)
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn nullspace<F: Field>(m: &Mat<F>, cols: usize) -> Vec<Vec<F>> {
    let (red, piv) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = red[i][f].neg();
            }
            v
        })
        .collect()
}

pub fn to_q(m: &[Vec<i64>]) -> Mat<Q> {
    m.iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
        .collect()
}
