use cdo_core::convolution::{
    alphabet, check_levels, label_tags, normalize_by, normalize_with, outer_tags, ConvExpr, Strategy as Order,
};
use cdo_core::levels::Level;
use cdo_core::rootdata::RootDatum;
use cdo_core::spectralflow::ModuleLabel;
use cdo_core::Q;
use proptest::prelude::*;

struct Pool {
    d: RootDatum,
    labels: Vec<ModuleLabel>,
}

fn pool(p: &str) -> Pool {
    let d = RootDatum::preset(p).unwrap();
    let k = Level::generic(&d);
    let weights: Vec<Vec<Q>> = d.dominant_weights(1).into_iter().take(3).collect();
    let mut labels = Vec::new();
    for m in [-1, 0, 1] {
        let km = k.shifted(&d, m).unwrap();
        labels.extend(alphabet(&d, &km, &[-1, 0, 1], &weights));
    }
    labels.sort();
    labels.dedup();
    Pool { d, labels }
}

/// Extend greedily, keeping every node well-leveled.
fn chain(pool: &Pool, picks: &[usize]) -> Vec<ModuleLabel> {
    let mut out: Vec<ModuleLabel> = Vec::new();
    for &i in picks {
        let ok: Vec<&ModuleLabel> = pool
            .labels
            .iter()
            .filter(|x| {
                let mut c = out.clone();
                c.push((*x).clone());
                check_levels(&pool.d, &ConvExpr::chain(c))
            })
            .collect();
        if ok.is_empty() {
            break;
        }
        out.push(ok[i % ok.len()].clone());
    }
    out
}

/// Random bracketing of a chain.
fn bracket(leaves: &[ModuleLabel], cuts: &mut impl Iterator<Item = usize>) -> ConvExpr {
    if leaves.len() == 1 {
        return ConvExpr::leaf(leaves[0].clone());
    }
    let at = 1 + cuts.next().unwrap_or(0) % (leaves.len() - 1);
    ConvExpr::conv(bracket(&leaves[..at], cuts), bracket(&leaves[at..], cuts))
}

fn is_trivial(l: &ModuleLabel) -> bool {
    matches!(l, ModuleLabel::Unit | ModuleLabel::Zero)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn all_orders_agree(
        p in prop::sample::select(vec!["SL2", "PSL2"]),
        picks in prop::collection::vec(0usize..64, 1..6),
        cuts in prop::collection::vec(0usize..8, 8),
        choices in prop::collection::vec(0usize..8, 16),
    ) {
        let pool = pool(p);
        let leaves = chain(&pool, &picks);
        prop_assume!(!leaves.is_empty());
        let e = bracket(&leaves, &mut cuts.into_iter());
        prop_assert!(e.depth() <= 5);
        let base = normalize_by(&pool.d, &e, Order::Leftmost).unwrap();
        prop_assert_eq!(&normalize_by(&pool.d, &e, Order::Rightmost).unwrap(), &base);
        prop_assert_eq!(&normalize_by(&pool.d, &e, Order::Tree).unwrap(), &base);
        let mut it = choices.into_iter().cycle();
        let random = normalize_with(&pool.d, &e, &mut |c: &[usize]| it.next().unwrap() % c.len()).unwrap();
        prop_assert_eq!(&random, &base);
        // Outer tags survive normalization.
        prop_assert_eq!((base.left.clone(), base.right.clone()), outer_tags(&pool.d, &leaves));
        // A lone one-sided label reports its level on both sides, so only
        // the tags the expression defines are compared.
        if !base.leaves.iter().any(is_trivial) {
            let (l0, r0) = outer_tags(&pool.d, &leaves);
            let (l1, r1) = outer_tags(&pool.d, &base.leaves);
            prop_assert!(l0.is_none() || l0 == l1);
            prop_assert!(r0.is_none() || r0 == r1);
        }
    }
}

#[test]
fn unit_laws() {
    for p in ["SL2", "PSL2", "SL3"] {
        let pool = pool(p);
        let d = &pool.d;
        let mut seen = 0;
        for x in &pool.labels {
            let alone = normalize_by(d, &ConvExpr::leaf(x.clone()), Order::Leftmost).unwrap().leaves;
            let (l, r) = label_tags(d, x);
            if let Some(l) = l {
                let e = ConvExpr::chain(vec![ModuleLabel::Cdo { level: l, shift: 0 }, x.clone()]);
                if check_levels(d, &e) {
                    assert_eq!(normalize_by(d, &e, Order::Leftmost).unwrap().leaves, alone, "{p}: D . {x}");
                    seen += 1;
                }
            }
            if let Some(r) = r {
                let e = ConvExpr::chain(vec![x.clone(), ModuleLabel::Cdo { level: r.dual(d), shift: 0 }]);
                if check_levels(d, &e) {
                    assert_eq!(normalize_by(d, &e, Order::Leftmost).unwrap().leaves, alone, "{p}: {x} . D");
                    seen += 1;
                }
            }
        }
        assert!(seen > 10, "{p}: only {seen} unit-law instances");
    }
}

#[test]
fn shifts_compose() {
    for p in ["SL2", "PSL2", "SL3", "GL2"] {
        let d = RootDatum::preset(p).unwrap();
        let k = Level::generic(&d);
        for m in -3..=3 {
            // The right factor sits at the level dual to k[m], which is k[m][0].
            let lm = k.shifted(&d, m).unwrap().shifted(&d, 0).unwrap();
            for n in -3..=3 {
                let e = ConvExpr::chain(vec![
                    ModuleLabel::Cdo { level: k.clone(), shift: m },
                    ModuleLabel::Cdo { level: lm.clone(), shift: n },
                ]);
                assert!(check_levels(&d, &e), "{p}: {m} {n}");
                let nf = normalize_by(&d, &e, Order::Leftmost).unwrap();
                assert_eq!(nf.leaves, vec![ModuleLabel::Cdo { level: k.clone(), shift: m + n }], "{p}: {m} {n}");
                assert_eq!(nf.right, k.shifted(&d, m + n).ok());
            }
        }
    }
}
