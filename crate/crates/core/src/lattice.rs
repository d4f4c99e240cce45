//! Integer lattices: Hermite and Smith normal forms, kernels, saturation.

use crate::linalg::{self, Field};
use crate::poly::Q;
use num_traits::ToPrimitive;

pub type IMat = Vec<Vec<i64>>;

fn ck(x: Option<i64>) -> i64 {
    x.expect("integer overflow in lattice reduction")
}

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose(m: &IMat, cols: usize) -> IMat {
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(a: &IMat, b: &IMat, inner: usize, cols: usize) -> IMat {
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| (0..inner).fold(0i64, |acc, k| ck(acc.checked_add(ck(r[k].checked_mul(b[k][j]))))))
                .collect()
        })
        .collect()
}

fn row_axpy(m: &mut IMat, dst: usize, src: usize, f: i64) {
    if f == 0 {
        return;
    }
    for j in 0..m[dst].len() {
        m[dst][j] = ck(m[dst][j].checked_sub(ck(f.checked_mul(m[src][j]))));
    }
}

fn col_axpy(m: &mut IMat, dst: usize, src: usize, f: i64) {
    if f == 0 {
        return;
    }
    for r in m.iter_mut() {
        r[dst] = ck(r[dst].checked_sub(ck(f.checked_mul(r[src]))));
    }
}

/// Row-style Hermite normal form with transform: returns `(h, u)` with
/// `u * m = h`, `u` unimodular, `h` in echelon form with positive pivots and
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hnf_with_transform(m: &IMat, cols: usize) -> (IMat, IMat) {
    let rows = m.len();
    let mut h = m.clone();
    let mut u = identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| h[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| h[i][c].abs()).expect("nonempty");
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[i][c] != 0 {
                    let f = h[i][c].div_euclid(h[r][c]);
                    row_axpy(&mut h, i, r, f);
                    row_axpy(&mut u, i, r, f);
                    if h[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][c] == 0 {
            continue;
        }
        if h[r][c] < 0 {
            for x in h[r].iter_mut() {
                *x = -*x;
            }
            for x in u[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let f = h[i][c].div_euclid(h[r][c]);
            row_axpy(&mut h, i, r, f);
            row_axpy(&mut u, i, r, f);
        }
        r += 1;
    }
    (h, u)
}

/// Canonical basis (nonzero HNF rows) of the lattice spanned by `rows`.
pub fn hnf_basis(rows: &IMat, cols: usize) -> IMat {
    hnf_with_transform(rows, cols)
        .0
        .into_iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect()
}

/// Smith normal form: `(s, u, v)` with `u * m * v = s` diagonal,
/// nonnegative, each diagonal entry dividing the next.
pub fn snf(m: &IMat, cols: usize) -> (IMat, IMat, IMat) {
    let rows = m.len();
    let mut s = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if s[i][j] != 0
                        && best.map(|(a, b)| s[i][j].abs() < s[a][b].abs()).unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (s, u, v);
            };
            s.swap(t, pi);
            u.swap(t, pi);
            for r in s.iter_mut() {
                r.swap(t, pj);
            }
            for r in v.iter_mut() {
                r.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let f = s[i][t] / s[t][t];
                row_axpy(&mut s, i, t, f);
                row_axpy(&mut u, i, t, f);
                clean &= s[i][t] == 0;
            }
            for j in t + 1..cols {
                let f = s[t][j] / s[t][t];
                col_axpy(&mut s, j, t, f);
                col_axpy(&mut v, j, t, f);
                clean &= s[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| s[i][j] % s[t][t] != 0));
            match bad {
                Some(i) => {
                    row_axpy(&mut s, t, i, -1);
                    row_axpy(&mut u, t, i, -1);
                }
                None => break,
            }
        }
        if s[t][t] < 0 {
            for x in s[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    (s, u, v)
}

/// Nonzero invariant factors.
pub fn invariant_factors(m: &IMat, cols: usize) -> Vec<i64> {
    let (s, _, _) = snf(m, cols);
    (0..m.len().min(cols)).map(|i| s[i][i]).filter(|&x| x != 0).collect()
}

/// Integer basis (as vectors) of `{x in Z^cols : m x = 0}`.
pub fn kernel(m: &IMat, cols: usize) -> Vec<Vec<i64>> {
    if m.is_empty() {
        return identity(cols);
    }
    let (s, _, v) = snf(m, cols);
    let r = (0..m.len().min(cols)).filter(|&i| s[i][i] != 0).count();
    (r..cols).map(|j| v.iter().map(|row| row[j]).collect()).collect()
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(u: &IMat) -> IMat {
    let inv = linalg::inverse(&linalg::to_q(u)).expect("unimodular");
    inv.iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    assert!(x.is_integer(), "not unimodular");
                    x.to_integer().to_i64().expect("fits")
                })
                .collect()
        })
        .collect()
}

/// Basis of `span_Q(gens) ∩ Z^n` for integer generators.
pub fn saturation(gens: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    if gens.is_empty() {
        return Vec::new();
    }
    // Columns are the generators.
    let b: IMat = (0..n).map(|i| gens.iter().map(|g| g[i]).collect()).collect();
    let (s, u, _) = snf(&b, gens.len());
    let r = (0..n.min(gens.len())).filter(|&i| s[i][i] != 0).count();
    let ui = unimodular_inverse(&u);
    let basis: IMat = (0..r).map(|j| ui.iter().map(|row| row[j]).collect()).collect();
    hnf_basis(&basis, n)
}

/// Clear denominators of a rational vector.
pub fn primitive_integer(v: &[Q]) -> Vec<i64> {
    let l = v
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints
        .iter()
        .fold(num_bigint::BigInt::from(0), |acc, x| num_integer::Integer::gcd(&acc, x));
    ints.iter()
        .map(|x| {
            let y = if g == 0.into() { x.clone() } else { x / &g };
            y.to_i64().expect("fits")
        })
        .collect()
}

/// Basis of the integer points of the rational nullspace of `m`.
pub fn rational_kernel_integral(m: &linalg::Mat<Q>, cols: usize) -> Vec<Vec<i64>> {
    let ns = linalg::nullspace(m, cols);
    let ints: Vec<Vec<i64>> = ns.iter().map(|v| primitive_integer(v)).collect();
    saturation(&ints, cols)
}

pub fn is_zero_vec<F: Field>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_cartan_a2() {
        let a = vec![vec![2, -1], vec![-1, 2]];
        assert_eq!(invariant_factors(&a, 2), vec![1, 3]);
        let (s, u, v) = snf(&a, 2);
        assert_eq!(mat_mul(&mat_mul(&u, &a, 2, 2), &v, 2, 2), s);
    }

    #[test]
    fn hermite_is_canonical() {
        let a = vec![vec![2, 4], vec![1, 3]];
        let b = vec![vec![1, 3], vec![3, 7]];
        assert_eq!(hnf_basis(&a, 2), hnf_basis(&b, 2));
        let (h, u) = hnf_with_transform(&a, 2);
        assert_eq!(mat_mul(&u, &a, 2, 2), h);
    }

    #[test]
    fn kernel_and_saturation() {
        let m = vec![vec![1, -1, 0], vec![0, 1, -1]];
        let k = kernel(&m, 3);
        assert_eq!(hnf_basis(&k, 3), vec![vec![1, 1, 1]]);
        let s = saturation(&[vec![2, 2]], 2);
        assert_eq!(s, vec![vec![1, 1]]);
    }
}
