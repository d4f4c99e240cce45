use cdo_core::Q;
use cdo_halflattice::relations::{check_a_alpha, check_e_minus, check_twist_intertwiner, check_vertex};
use cdo_halflattice::{classify_module, d_of, descent_weight_vector, sf_twist_state, Engine, Mono, Sector, Side, State, TorusModuleSpec};
use cdo_halflattice::state::Basis;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x, 1)).collect()
}

fn rank2_kappa() -> Vec<Vec<Q>> {
    vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]]
}

fn sectors(e: &Engine, gammas: &[Vec<i64>], alphas: &[Vec<i64>]) -> Vec<Sector> {
    let mut out = Vec::new();
    for g in gammas {
        let kg = e.kappa_of(&qs(g));
        for a in alphas {
            out.push(Sector::new(
                a.iter().zip(&kg).map(|(&x, k)| q(x, 1) - k).collect(),
                a.iter().map(|&x| q(-x, 1)).collect(),
            ));
        }
    }
    out
}

#[test]
fn a_alpha_relations_rank1() {
    let e = Engine::new(vec![vec![q(3, 2)]], 4).unwrap();
    let s = sectors(&e, &[vec![0], vec![1]], &[vec![0], vec![2]]);
    let rep = check_a_alpha(&e, &s, &[1], &[qs(&[1])], (-2, 2), 3).unwrap();
    assert!(rep.ok(), "{:?}", rep.failures);
    assert!(rep.checked > 500);
}

#[test]
fn a_alpha_relations_rank2() {
    let e = Engine::new(rank2_kappa(), 4).unwrap();
    let s = sectors(&e, &[vec![0, 0], vec![1, -1]], &[vec![0, 0]]);
    for alpha in [[1, 0], [0, 1], [1, -2]] {
        let rep = check_a_alpha(&e, &s, &alpha, &[qs(&[1, 0]), qs(&[0, 1])], (-2, 1), 2).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
    }
}

#[test]
fn vertex_commutators() {
    let e = Engine::new(vec![vec![q(1, 1)]], 4).unwrap();
    let s = sectors(&e, &[vec![0]], &[vec![0], vec![1]]);
    let rep = check_vertex(&e, &s, &[1], &[qs(&[1])], (-1, 1), 2).unwrap();
    assert!(rep.ok(), "{:?}", rep.failures);
}

#[test]
fn e_minus_commutators() {
    let e = Engine::new(rank2_kappa(), 4).unwrap();
    let s = vec![Sector::vacuum(2)];
    let rep = check_e_minus(&e, &s, &[q(1, 2), q(-1, 3)], &[qs(&[1, 0]), qs(&[0, 1])], 3, 2);
    assert!(rep.ok(), "{:?}", rep.failures);
}

#[test]
fn twist_intertwines() {
    let e = Engine::new(rank2_kappa(), 4).unwrap();
    let s = sectors(&e, &[vec![0, 0]], &[vec![0, 0], vec![1, 0]]);
    let rep = check_twist_intertwiner(&e, &s, &[1, -2], &[qs(&[1, 0]), qs(&[0, 1])], 2);
    assert!(rep.ok(), "{:?}", rep.failures);
}

#[test]
fn descent_on_vacuum_is_identity() {
    let e = Engine::new(vec![vec![q(3, 2)]], 6).unwrap();
    let v = State::vacuum(Sector::vacuum(1));
    let r = descent_weight_vector(&e, &v).unwrap();
    assert_eq!(r.vector, v);
    assert_eq!((r.lambda, r.twist), (vec![0], vec![0]));
    assert!(r.steps.is_empty());
}

#[test]
fn descent_on_twisted_vacuum() {
    let e = Engine::new(vec![vec![q(3, 1)]], 6).unwrap();
    let spec = TorusModuleSpec::cdo(vec![vec![q(3, 1)]], &[0], 0, 6).unwrap();
    let tw = sf_twist_state(&[2], &spec).unwrap();
    let v = State::vacuum(tw.sectors[0].sector.clone());
    let r = descent_weight_vector(&e, &v).unwrap();
    assert_eq!((r.lambda, r.twist, r.gamma_prime), (vec![0], vec![2], vec![-2]));
}

#[test]
fn descent_on_mixed_vector() {
    let e = Engine::new(vec![vec![q(1, 1)]], 6).unwrap();
    let excited = State::basis(Basis { sector: Sector::vacuum(1), left: Mono::one().with(0, 1), right: Mono::one() });
    let v = excited.add(&State::vacuum(Sector::new(qs(&[1]), qs(&[-1]))));
    assert_eq!(d_of(&e, &v), 1);
    let r = descent_weight_vector(&e, &v).unwrap();
    assert_eq!(r.lambda, vec![1]);
    assert_eq!(r.gamma_prime, vec![0]);
    assert_eq!(r.steps.len(), 1);
    assert_eq!((r.steps[0].d_before, r.steps[0].d_after), (1, 0));
}

#[test]
fn descent_rejects_right_excitations() {
    let e = Engine::new(vec![vec![q(1, 1)]], 6).unwrap();
    let v = State::basis(Basis { sector: Sector::vacuum(1), left: Mono::one(), right: Mono::one().with(0, 1) });
    let err = descent_weight_vector(&e, &v).unwrap_err();
    assert!(err.to_string().contains("right invariants"), "{err}");
}

#[test]
fn classify_rejects_inadmissible() {
    let spec = TorusModuleSpec::new(
        vec![vec![q(2, 1)]],
        vec![cdo_halflattice::SectorSpec { sector: Sector::new(qs(&[1]), qs(&[0])), gamma: None, base: None, copy: 0 }],
        2,
    )
    .unwrap();
    assert!(classify_module(&spec).unwrap_err().to_string().contains("admissible sector"));
}

#[test]
fn classify_multiset_with_repeats() {
    let k = vec![vec![q(5, 2)]];
    let spec = TorusModuleSpec::cdo_sum(k, &[vec![1], vec![1], vec![0]], 1, 2).unwrap();
    assert_eq!(classify_module(&spec).unwrap(), vec![vec![0], vec![1], vec![1]]);
    let back = TorusModuleSpec::from_toml(&spec.to_toml()).unwrap();
    assert_eq!(back, spec);
}

/// Random lowest-weight-invariant vector in the span of a few twisted CDO
/// windows; descent must land on one of the summands.
fn random_vector(rng: &mut ChaCha8Rng, e: &Engine, gammas: &[Vec<i64>]) -> State {
    let mut v = State::zero();
    for g in gammas {
        let s = sectors(e, &[g.clone()], &[vec![rng.gen_range(-1..=1)]])[0].clone();
        let mut left = Mono::one();
        for _ in 0..rng.gen_range(0..3) {
            left = left.with(0, rng.gen_range(1..=2));
        }
        v.add_term(Basis { sector: s, left, right: Mono::one() }, q(rng.gen_range(1..5), 1));
    }
    v
}

#[test]
fn descent_lands_in_a_summand() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let e = Engine::new(vec![vec![q(3, 2)]], 6).unwrap();
    for _ in 0..10 {
        let gammas: Vec<Vec<i64>> = (0..rng.gen_range(1..=3)).map(|_| vec![rng.gen_range(-2..=2)]).collect();
        let v = random_vector(&mut rng, &e, &gammas);
        if v.is_zero() {
            continue;
        }
        let r = descent_weight_vector(&e, &v).unwrap();
        assert!(gammas.contains(&r.twist), "{:?} not in {gammas:?}", r.twist);
        for w in r.steps.windows(2) {
            assert!(w[1].d_before <= w[0].d_after || w[1].k == 0);
        }
        // Lowest weight: killed by every positive mode.
        for n in 1..4 {
            assert!(e.heis(Side::Left, &qs(&[1]), n, &r.vector).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn twist_roundtrip(g in -3i64..=3, h in -3i64..=3) {
        let k = vec![vec![q(3, 2)]];
        let spec = TorusModuleSpec::cdo(k, &[g], 1, 2).unwrap();
        let back = sf_twist_state(&[-h], &sf_twist_state(&[h], &spec).unwrap()).unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn classify_recovers_twists(gs in proptest::collection::vec(-3i64..=3, 1..4)) {
        let k = vec![vec![q(7, 3)]];
        let gammas: Vec<Vec<i64>> = gs.iter().map(|&g| vec![g]).collect();
        let spec = TorusModuleSpec::cdo_sum(k, &gammas, 1, 2).unwrap();
        let mut want = gammas.clone();
        want.sort();
        prop_assert_eq!(classify_module(&spec).unwrap(), want);
    }
}
