use cdo_core::charring::{cdo_char, fock_char};
use cdo_core::dsred::{c_twist, reduce_cdo_sf, reduce_sf_weyl};
use cdo_core::levels::Level;
use cdo_core::rootdata::{qvec, RootDatum};
use cdo_core::spectralflow::{cdo_sf_embed, sf_group, sf_integrality_check, twist_fock, ModuleLabel, SFContext};
use cdo_core::{Scalar, Q};
use num_traits::Zero;
use proptest::prelude::*;
use std::collections::BTreeSet;

fn half(n: i64) -> Q {
    Q::new(n.into(), 2.into())
}

/// Every point of `(½ℤ)^n` modulo `ℤ^n`.
fn half_cosets(n: usize) -> Vec<Vec<Q>> {
    (0..1usize << n)
        .map(|bits| (0..n).map(|i| half(((bits >> i) & 1) as i64)).collect())
        .collect()
}

#[test]
fn sf_group_image_is_integral_on_cdo_support() {
    for p in ["SL2", "PSL2", "T2"] {
        let d = RootDatum::preset(p).unwrap();
        let r = d.rank();
        let ch = cdo_char(&d, &Level::generic(&d), 1, 3).unwrap();
        let g = sf_group(&d, SFContext::Cdo);
        for v in &g.lattice {
            let (h, h2) = cdo_sf_embed(&d, &v[..r], &v[r..]).unwrap();
            assert!(sf_integrality_check(&h, &h2, &ch), "{p}: generator {v:?}");
        }
        // Image modulo ℤ^2r, by hand: SL2 coweights are ½ℤ and w0 = -1, so
        // (γ + x, -x) hits (0,0) and (½,½). PSL2 coweights are integral. A
        // torus has no roots, so every x is a coweight and w0 = 1: the
        // image is the diagonal.
        let image: BTreeSet<Vec<Q>> = match p {
            "SL2" => [vec![half(0), half(0)], vec![half(1), half(1)]].into_iter().collect(),
            "T2" => half_cosets(r).into_iter().map(|c| [c.clone(), c].concat()).collect(),
            _ => [vec![Q::zero(); 2 * r]].into_iter().collect(),
        };
        for c in &image {
            // x = w0 h2 and γ = h - x reach c.
            let x = d.w0_coweight(&c[r..]);
            let gamma: Vec<Q> = c[..r].iter().zip(&x).map(|(a, b)| a - b).collect();
            let (h, h2) = cdo_sf_embed(&d, &gamma, &x).unwrap();
            assert_eq!([h, h2].concat(), *c, "{p}");
        }
        for c in half_cosets(2 * r) {
            let passes = sf_integrality_check(&c[..r], &c[r..], &ch);
            assert_eq!(passes, image.contains(&c), "{p}: coset {c:?}");
        }
    }
}

fn t1_fock(k: i64, w: i64) -> (RootDatum, ModuleLabel) {
    let d = RootDatum::torus(1);
    let level = Level::new(&d, vec![vec![Scalar::from_int(k)]], Vec::new()).unwrap();
    (d, ModuleLabel::Fock { level, weight: vec![Scalar::from_int(w)] })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn twists_form_a_group_action(a in -4i64..5, b in -4i64..5, w in -3i64..4) {
        let (_, m) = t1_fock(3, w);
        let tw = |x: i64, l: ModuleLabel| ModuleLabel::twist(qvec(&[x]), l);
        prop_assert_eq!(tw(a, tw(b, m.clone())), tw(a + b, m.clone()));
        prop_assert_eq!(tw(0, m.clone()), m.clone());
        prop_assert_eq!(tw(a, tw(-a, m.clone())), m);
    }

    #[test]
    fn twisted_fock_offset(k in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3, 5]), w in -4i64..5, x in -3i64..4) {
        let (d, m) = t1_fock(k, w);
        let ModuleLabel::Fock { level, weight } = twist_fock(&d, &qvec(&[x]), &m).unwrap() else { unreachable!() };
        let shifted = w - k * x;
        prop_assert_eq!(weight, vec![Scalar::from_int(shifted)]);
        let c = fock_char(&d, &qvec(&[shifted]), &level, 1).unwrap();
        // (λ - κx)² / (2κ)
        prop_assert_eq!(c.offset, Scalar::from_q(Q::new((shifted * shifted).into(), (2 * k).into())));
    }

    #[test]
    fn reduction_vanishes_off_the_cone(p in prop::sample::select(vec!["SL2", "PSL2", "SL3", "PGL3", "Spin(D4)"]), mu in prop::collection::vec(-3i64..4, 4)) {
        let d = RootDatum::preset(p).unwrap();
        let r = d.rank();
        // In these presets X_* coordinates pair with roots through the Cartan rows.
        let mu = qvec(&mu[..r]);
        let dominant = d.simple_roots().iter().all(|a| a.iter().zip(&mu).map(|(x, y)| Q::from_integer((*x).into()) * y).sum::<Q>() >= Q::zero());
        let res = reduce_sf_weyl(&d, &vec![Q::zero(); r], &mu, &Level::generic(&d)).unwrap();
        prop_assert_eq!(res.payload.is_zero(), !dominant);
        prop_assert_eq!(res.degree.is_none(), !dominant);
    }
}

#[test]
fn degree_is_twice_rho_and_the_ghost_charge() {
    for p in ["SL2", "PSL2", "SL3", "PGL3", "SL4", "Spin(D4)"] {
        let d = RootDatum::preset(p).unwrap();
        let k = Level::generic(&d);
        let zero = vec![Q::zero(); d.rank()];
        let pos = d.positive_root_vectors();
        for mu in d.dual().dominant_p_weights(6) {
            let two_rho: Q = pos.iter().map(|a| a.iter().zip(&mu).map(|(x, y)| x * y).sum::<Q>()).sum();
            let deg = reduce_sf_weyl(&d, &zero, &mu, &k).unwrap().degree.unwrap();
            assert_eq!(Q::from_integer(deg.into()), two_rho, "{p}: {mu:?}");
            assert_eq!(c_twist(&d, &mu).unwrap().charge_shift(), -deg, "{p}: {mu:?}");
        }
    }
}

#[test]
fn eqw_twists_are_pairwise_distinct() {
    for p in ["SL2", "PSL2", "SL3", "PGL3"] {
        let d = RootDatum::preset(p).unwrap();
        let k = Level::generic(&d);
        let zero = vec![Q::zero(); d.rank()];
        let gammas: Vec<_> = d.dual().dominant_weights(4).into_iter().filter(|g| g.iter().all(|x| x.is_integer())).collect();
        let labels: BTreeSet<ModuleLabel> =
            gammas.iter().map(|g| reduce_cdo_sf(&d, g, &zero, &k).unwrap().payload.normalize()).collect();
        assert_eq!(labels.len(), gammas.len(), "{p}");
        assert!(labels.iter().all(|l| !l.is_zero()));
    }
}
