use cdo_core::rootdata::{q, qadd, RootDatum};
use cdo_core::Q;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const CATALOG: [&str; 20] = [
    "SL2", "PSL2", "SL3", "PGL3", "SL4", "SL5", "GL2", "GL3", "T1", "T2", "Spin(D4)", "SpinAdj(D4)", "SC(B3)", "Adj(B3)",
    "SC(C3)", "SC(G2)", "Adj(G2)", "SC(F4)", "SC(E6)", "Adj(E7)",
];

fn cartan_from_pairings(d: &RootDatum) -> Vec<Vec<Q>> {
    let r = d.semisimple_rank();
    (0..r)
        .map(|i| (0..r).map(|j| d.pairing(&d.simple_root(j), &d.simple_coroot(i)).unwrap()).collect())
        .collect()
}

/// `s_i` with `s_i a_ij = s_j a_ji`, propagated along the Dynkin graph.
fn symmetrizer(a: &[Vec<Q>]) -> Vec<Q> {
    let n = a.len();
    let mut s: Vec<Option<Q>> = vec![None; n];
    for root in 0..n {
        if s[root].is_some() {
            continue;
        }
        s[root] = Some(Q::one());
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i != j && !a[i][j].is_zero() && s[j].is_none() {
                    s[j] = Some(s[i].clone().unwrap() * &a[i][j] / &a[j][i]);
                    stack.push(j);
                }
            }
        }
    }
    s.into_iter().map(Option::unwrap).collect()
}

fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut acc = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        acc *= m[c][c].clone();
        for r in c + 1..n {
            let f = m[r][c].clone() / &m[c][c];
            for k in c..n {
                let t = m[c][k].clone() * &f;
                m[r][k] -= t;
            }
        }
    }
    acc
}

#[test]
fn cartan_matrices_are_finite_type() {
    for p in CATALOG {
        let d = RootDatum::preset(p).unwrap();
        let a = cartan_from_pairings(&d);
        let n = a.len();
        for i in 0..n {
            assert_eq!(a[i][i], q(2), "{p}");
            for j in 0..n {
                assert!(i == j || !a[i][j].is_positive(), "{p}");
                assert_eq!(a[i][j].is_zero(), a[j][i].is_zero(), "{p}");
            }
        }
        let s = symmetrizer(&a);
        let sym: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| s[i].clone() * &a[i][j]).collect()).collect();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(sym[i][j], sym[j][i], "{p}: symmetrizer");
            }
        }
        for m in 1..=n {
            let minor: Vec<Vec<Q>> = sym[..m].iter().map(|r| r[..m].to_vec()).collect();
            assert!(det(minor).is_positive(), "{p}: leading minor {m}");
        }
    }
}

#[test]
fn dual_is_an_involution_on_the_catalog() {
    for p in CATALOG {
        let d = RootDatum::preset(p).unwrap();
        assert_eq!(d.dual().dual().canonical_form(), d.canonical_form(), "{p}");
        assert_eq!(d.dual().rank(), d.rank());
        assert_eq!(d.dual().positive_roots().len(), d.positive_roots().len());
    }
}

#[test]
fn dual_swaps_simply_connected_and_adjoint() {
    let sl3 = RootDatum::preset("SL3").unwrap();
    let pgl3 = RootDatum::preset("PGL3").unwrap();
    assert_eq!(sl3.dual().canonical_form(), pgl3.canonical_form());
    let b3 = RootDatum::preset("SC(B3)").unwrap();
    assert_eq!(b3.dual().component_types()[0].series, 'C');
}

fn int_cartan(d: &RootDatum) -> Vec<Vec<i64>> {
    cartan_from_pairings(d)
        .iter()
        .map(|r| r.iter().map(|x| x.to_integer().try_into().unwrap()).collect())
        .collect()
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let sub: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * int_det(&sub)
        })
        .sum()
}

/// Fundamental coordinates `m` lie in the span of the Cartan rows iff
/// `m · adj(A)` is divisible by `det A`.
fn in_root_lattice(a: &[Vec<i64>], m: &[i64]) -> bool {
    let n = a.len();
    let dt = int_det(a);
    (0..n).all(|j| {
        let adj_col = |i: usize| {
            let minor: Vec<Vec<i64>> = a
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != j)
                .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, &x)| x).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            sign * int_det(&minor)
        };
        let c: i64 = (0..n).map(|i| m[i] * adj_col(i)).sum();
        c % dt == 0
    })
}

fn ints(v: &[Q]) -> Vec<i64> {
    v.iter().map(|x| x.to_integer().try_into().unwrap()).collect()
}

#[test]
fn minuscule_match_is_unique() {
    for (p, p1_size) in [("SL2", 2), ("SL3", 3), ("SL4", 4), ("SL5", 5), ("Spin(D4)", 4)] {
        let d = RootDatum::preset(p).unwrap();
        let a = int_cartan(&d);
        let p1 = d.p1_plus();
        assert_eq!(p1.len(), p1_size, "{p}");
        for mu in d.dominant_p_weights(10) {
            let m = ints(&d.fundamental_coords(&mu));
            let hits: Vec<_> = p1
                .iter()
                .filter(|l| {
                    let s: Vec<i64> = m.iter().zip(ints(&d.fundamental_coords(l))).map(|(x, y)| x + y).collect();
                    in_root_lattice(&a, &s)
                })
                .collect();
            assert_eq!(hits.len(), 1, "{p}: {m:?}");
            let got = d.minuscule_match(&mu).unwrap();
            assert_eq!(&got, hits[0], "{p}: {m:?}");
            assert!(d.in_root_lattice(&qadd(&mu, &got)));
        }
    }
}

fn simply_connected() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["SL2", "SL3", "SL4", "Spin(D4)", "SC(B3)", "SC(C3)", "SC(G2)"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minus_w0_preserves_dominance_and_dimension(p in simply_connected(), m in prop::collection::vec(0i64..4, 4)) {
        let d = RootDatum::preset(p).unwrap();
        let lam = d.weight_from_fundamental(&m[..d.semisimple_rank()]);
        let dual = d.minus_w0(&lam);
        prop_assert!(d.is_dominant(&dual));
        prop_assert_eq!(d.weyl_dimension(&dual).unwrap(), d.weyl_dimension(&lam).unwrap());
        prop_assert_eq!(d.minus_w0(&dual), lam);
    }

    #[test]
    fn reflections_are_involutions(p in simply_connected(), m in prop::collection::vec(-4i64..4, 4), i in 0usize..4) {
        let d = RootDatum::preset(p).unwrap();
        let r = d.semisimple_rank();
        let lam = d.weight_from_fundamental(&m[..r]);
        let i = i % r;
        prop_assert_eq!(d.reflect(i, &d.reflect(i, &lam)), lam.clone());
        prop_assert!(d.weyl_orbit(&lam).contains(&d.to_dominant(&lam)));
    }
}
