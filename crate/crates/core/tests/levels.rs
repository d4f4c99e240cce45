use cdo_core::levels::{shifted_chain, shifted_level, Level};
use cdo_core::rootdata::RootDatum;
use cdo_core::Scalar;
use proptest::prelude::*;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn k() -> Scalar {
    Scalar::var("k")
}

fn recip(x: &Scalar) -> Scalar {
    x.inv().expect("nonzero")
}

/// `(a k + b) / (c k + d)` with `c k + d ≠ 0`.
fn moebius() -> impl Strategy<Value = Scalar> {
    (-6i64..6, -6i64..6, -6i64..6, 1i64..6).prop_map(|(a, b, c, d)| {
        let num = &(&s(a) * &k()) + &s(b);
        let den = &(&s(c) * &k()) + &s(d);
        num.checked_div(&den).unwrap()
    })
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-60i64..60, 1i64..13).prop_map(|(a, b)| Scalar::from_ratio(a, b))
}

fn datum() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["SL2", "PSL2", "SL3", "GL2", "T2", "Spin(D4)", "SC(G2)"])
}

fn level_on(d: &RootDatum, xs: &[Scalar]) -> Level {
    let z = d.center_rank();
    let mut ab = vec![vec![Scalar::zero(); z]; z];
    let mut it = xs.iter().cycle();
    for i in 0..z {
        for j in i..z {
            let x = it.next().unwrap().clone();
            ab[i][j] = x.clone();
            ab[j][i] = x;
        }
    }
    let simple = (0..d.components().len()).map(|_| it.next().unwrap().clone()).collect();
    Level::new(d, ab, simple).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dual_is_an_involution_on_rationals(p in datum(), xs in prop::collection::vec(rational(), 4)) {
        let d = RootDatum::preset(p).unwrap();
        let lv = level_on(&d, &xs);
        prop_assert_eq!(lv.dual(&d).dual(&d), lv);
    }

    #[test]
    fn dual_is_an_involution_on_symbolic_levels(p in datum(), xs in prop::collection::vec(moebius(), 4)) {
        let d = RootDatum::preset(p).unwrap();
        let lv = level_on(&d, &xs);
        prop_assert_eq!(lv.dual(&d).dual(&d), lv);
    }

    #[test]
    fn shift_group_law(m in -5i64..=5, n in -5i64..=5, hv in 1i64..8) {
        let km0 = shifted_chain(&k(), &[m, 0], hv).unwrap();
        let lhs = shifted_level(&km0, n, hv).unwrap();
        prop_assert_eq!(&lhs, &shifted_level(&k(), m + n, hv).unwrap());
        // 1/(k[n]+ȟ) = n - 1/(k+ȟ)
        let want = &s(m + n) - &recip(&(&k() + &s(hv)));
        prop_assert_eq!(recip(&(&lhs + &s(hv))), want);
    }

    #[test]
    fn shift_zero_is_the_dual(p in prop::sample::select(vec!["SL2", "SL3", "Spin(D4)", "SC(B3)"]), x in moebius()) {
        let d = RootDatum::preset(p).unwrap();
        let hv = d.dual_coxeter(0).unwrap();
        prop_assume!(!(&x + &s(hv)).is_zero());
        let lv = Level::uniform(&d, &x);
        prop_assert_eq!(lv.shifted(&d, 0).unwrap(), lv.dual(&d));
    }

    #[test]
    fn genericity_is_preserved(a in 1i64..6, b in -6i64..6) {
        let gl2 = RootDatum::preset("GL2").unwrap();
        let sl3 = RootDatum::preset("SL3").unwrap();
        let x = &(&s(a) * &k()) + &s(b);
        let g = Level::uniform(&gl2, &x);
        let h = Level::generic(&sl3);
        prop_assert!(g.is_generic());
        prop_assert!(g.dual(&gl2).is_generic());
        prop_assert!(g.direct_sum(&h).is_generic());
    }

    #[test]
    fn critical_is_the_only_fixed_point(p in datum(), x in rational()) {
        let d = RootDatum::preset(p).unwrap();
        let lv = Level::uniform(&d, &x);
        let fixed = lv.dual(&d).simple == lv.simple;
        let critical = lv.simple == Level::critical(&d).simple;
        prop_assert_eq!(fixed, critical);
    }
}

#[test]
fn critical_levels_are_fixed() {
    for p in ["SL2", "SL3", "GL3", "Spin(D4)", "SC(B3)", "SC(C3)", "SC(G2)", "SC(E6)", "T1"] {
        let d = RootDatum::preset(p).unwrap();
        let c = Level::critical(&d);
        assert_eq!(c.dual(&d).simple, c.simple, "{p}");
        // k = -k - 2ȟ has the single solution k = -ȟ.
        for (i, kc) in c.simple.iter().enumerate() {
            assert_eq!(*kc, s(-d.dual_coxeter(i).unwrap()), "{p}");
        }
    }
}

#[test]
fn symbolic_fixed_point_is_critical() {
    // -k - 2ȟ = k  <=>  2k + 2ȟ = 0, so only the constant -ȟ works.
    let d = RootDatum::preset("SL3").unwrap();
    let g = Level::generic(&d);
    let diff = &g.dual(&d).simple[0] - &g.simple[0];
    assert_eq!(diff, &(&s(-2) * &k()) - &s(6));
}

#[test]
fn center_shift_group_law() {
    let d = RootDatum::preset("GL2").unwrap();
    let g = Level::generic(&d);
    for m in -3..=3 {
        let m0 = g.shifted(&d, m).unwrap().shifted(&d, 0).unwrap();
        for n in -3..=3 {
            assert_eq!(m0.shifted(&d, n).unwrap(), g.shifted(&d, m + n).unwrap(), "{m} {n}");
        }
    }
}

#[test]
fn shift_pole_and_critical_are_rejected() {
    assert!(shifted_level(&s(-2), 1, 2).is_err());
    // 1 (k+2) = 1 at k = -1
    assert!(shifted_level(&s(-1), 1, 2).is_err());
}
