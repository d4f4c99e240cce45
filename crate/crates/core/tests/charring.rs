use cdo_core::charring::{cdo_char, finite_char, fock_char, og_char, weyl_module_char, GradedCharacter, Key};
use cdo_core::levels::{casimir_offset, Level};
use cdo_core::rootdata::{q, qvec, RootDatum};
use cdo_core::{Scalar, Q};
use proptest::prelude::*;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// Coefficients of `Π_{n≥1} (1 - q^n)^{-c}` through `q^t`.
fn colored_partitions(c: usize, t: usize) -> Vec<i64> {
    let mut p = vec![0i64; t + 1];
    p[0] = 1;
    for _ in 0..c {
        for n in 1..=t {
            for j in n..=t {
                p[j] += p[j - n];
            }
        }
    }
    p
}

#[test]
fn sl2_weyl_module_dimensions() {
    let d = RootDatum::preset("SL2").unwrap();
    let k = Level::generic(&d);
    let p = colored_partitions(3, 4);
    for n in 0..5i64 {
        let c = weyl_module_char(&d, &qvec(&[n]), &k, 4).unwrap();
        for j in 0..=4 {
            assert_eq!(c.graded_dimension(j), (n + 1) * p[j as usize], "n = {n}, q^{j}");
        }
        let fin = finite_char(&d, &qvec(&[n])).unwrap();
        let weights: Vec<Vec<Q>> = fin.terms().map(|(k, _)| k.left.clone()).collect();
        let want: Vec<Vec<Q>> = (0..=n).map(|i| qvec(&[-n + 2 * i])).collect();
        assert_eq!(weights, want);
    }
}

#[test]
fn peter_weyl_q0_layer() {
    for (p, cutoff) in [("SL2", 3), ("PSL2", 3), ("T2", 2), ("SL3", 2)] {
        let d = RootDatum::preset(p).unwrap();
        let ch = cdo_char(&d, &Level::generic(&d), 2, cutoff).unwrap();
        let layer = ch.extract_coefficient(0);
        let og = og_char(&d, cutoff).unwrap();
        assert!(layer.same_terms(&og), "{p}");
        assert_eq!(layer.offset, og.offset, "{p}");
    }
    // SL2 heights are n/2: Σ_{n ≤ 6} (n+1)^2.
    let d = RootDatum::preset("SL2").unwrap();
    assert_eq!(og_char(&d, 3).unwrap().graded_dimension(0), (1..=7).map(|m| m * m).sum::<i64>());
}

#[test]
fn offsets_cancel_across_dual_levels() {
    for p in ["SL2", "PSL2", "SL3", "GL2", "Spin(D4)", "SC(B3)", "SC(G2)"] {
        let d = RootDatum::preset(p).unwrap();
        let k = Level::generic(&d);
        let kd = k.dual(&d);
        for l in d.dominant_weights(4) {
            let a = casimir_offset(&d, &l, &k).unwrap();
            let b = casimir_offset(&d, &d.minus_w0(&l), &kd).unwrap();
            assert!((&a + &b).is_zero(), "{p}: {l:?}");
        }
    }
}

fn torus_level(d: &RootDatum, m: &[[i64; 2]; 2], sign: i64) -> Level {
    let ab = m.iter().map(|r| r.iter().map(|&x| s(sign * x)).collect()).collect();
    Level::new(d, ab, Vec::new()).unwrap()
}

/// `(λ, κ⁻¹ λ)/2` by the explicit 2x2 inverse.
fn quad(m: &[[i64; 2]; 2], l: &[i64; 2]) -> Q {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let num = m[1][1] * l[0] * l[0] - 2 * m[0][1] * l[0] * l[1] + m[0][0] * l[1] * l[1];
    Q::new(num.into(), (2 * det).into())
}

fn form() -> impl Strategy<Value = [[i64; 2]; 2]> {
    (-4i64..5, -4i64..5, -4i64..5)
        .prop_filter("nondegenerate", |(a, b, c)| a * c - b * b != 0)
        .prop_map(|(a, b, c)| [[a, b], [b, c]])
}

fn key(q: i64, charge: i64, l: &[i64], r: &[i64]) -> Key {
    Key { q, charge, left: qvec(l), right: qvec(r) }
}

fn small_char() -> impl Strategy<Value = GradedCharacter> {
    let term = (0i64..4, -1i64..2, prop::array::uniform2(-2i64..3), prop::array::uniform2(-2i64..3), -3i64..4);
    (prop::collection::vec(term, 1..5), -3i64..4).prop_map(|(ts, off)| {
        let mut c = GradedCharacter::zero(2, 2, 8);
        for (qq, ch, l, r, m) in ts {
            c.add_term(key(qq, ch, &l, &r), m);
        }
        c.offset = Scalar::from_ratio(off, 2);
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fock_product_offset(m in form(), l in prop::array::uniform2(-3i64..4), mu in prop::array::uniform2(-3i64..4)) {
        let d = RootDatum::torus(2);
        let a = fock_char(&d, &qvec(&l), &torus_level(&d, &m, 1), 2).unwrap();
        let b = fock_char(&d, &qvec(&mu), &torus_level(&d, &m, -1), 2).unwrap();
        let prod = a.mul(&b).unwrap();
        prop_assert_eq!(prod.offset.clone(), Scalar::from_q(quad(&m, &l) - quad(&m, &mu)));
        let neg = [-l[0], -l[1]];
        let c = fock_char(&d, &qvec(&neg), &torus_level(&d, &m, -1), 2).unwrap();
        prop_assert!(a.mul(&c).unwrap().offset.is_zero());
        // Two free bosons: 1, 2, 5 states at q^0, q^1, q^2.
        prop_assert_eq!((0..=2).map(|j| prod.graded_dimension(j)).collect::<Vec<_>>(), colored_partitions(4, 2));
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in small_char(), b in small_char(), c in small_char()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn unit_is_neutral(a in small_char()) {
        let one = GradedCharacter::unit(2, 2, 8);
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
    }
}

#[test]
fn casimir_offset_closed_form_sl3() {
    // (λ, λ+2ρ)/(2(k+3)) with (λ,λ+2ρ) = (2/3)(a²+ab+b²+3a+3b).
    let d = RootDatum::preset("SL3").unwrap();
    let k = Level::generic(&d);
    for a in 0..4 {
        for b in 0..4 {
            let c = q(2) * Q::new((a * a + a * b + b * b + 3 * a + 3 * b).into(), 3.into());
            let want = Scalar::from_q(c).checked_div(&(&s(2) * &(&Scalar::var("k") + &s(3)))).unwrap();
            assert_eq!(casimir_offset(&d, &qvec(&[a, b]), &k).unwrap(), want);
        }
    }
}
