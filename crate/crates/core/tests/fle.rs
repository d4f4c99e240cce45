use cdo_core::fle::{fle_table, shifted_w_simples, torus_y};
use cdo_core::levels::Level;
use cdo_core::rootdata::{is_integral, qadd, RootDatum};
use cdo_core::{Scalar, Q};
use proptest::prelude::*;

fn ints(v: &[Q]) -> Vec<i64> {
    v.iter().map(|x| x.to_integer().try_into().unwrap()).collect()
}

#[test]
fn table_rows_match_dual_dominant_weights() {
    for h in 0..5i64 {
        // PSL2: dual SL2, γ = n with height n/2.
        let d = RootDatum::preset("PSL2").unwrap();
        let t = fle_table(&d, &Level::generic(&d), h).unwrap();
        assert_eq!(t.rows.len() as i64, 2 * h + 1);
        for r in &t.rows {
            let n = ints(&d.dual().fundamental_coords(&r.gamma))[0];
            assert_eq!(r.dim as i64, n + 1);
        }
        // PGL3: dual SL3, γ = (a, b) with height a + b.
        let d = RootDatum::preset("PGL3").unwrap();
        let t = fle_table(&d, &Level::generic(&d), h).unwrap();
        assert_eq!(t.rows.len() as i64, (h + 1) * (h + 2) / 2);
        for r in &t.rows {
            let ab = ints(&d.dual().fundamental_coords(&r.gamma));
            let (a, b) = (ab[0], ab[1]);
            assert_eq!(r.dim as i64, (a + 1) * (b + 1) * (a + b + 2) / 2);
            assert_eq!(r.target, r.gamma);
        }
        assert!(!t.conjectural);
    }
}

fn rational_form() -> impl Strategy<Value = [[(i64, i64); 2]; 2]> {
    ((-6i64..7, 1i64..5), (-6i64..7, 1i64..5), (-6i64..7, 1i64..5))
        .prop_filter("nondegenerate", |((a, b), (c, e), (f, g))| {
            Q::new((*a).into(), (*b).into()) * Q::new((*f).into(), (*g).into()) != Q::new((c * c).into(), (e * e).into())
        })
        .prop_map(|(a, c, f)| [[a, c], [c, f]])
}

fn kappa_q(m: &[[(i64, i64); 2]; 2]) -> [[Q; 2]; 2] {
    m.map(|r| r.map(|(a, b)| Q::new(a.into(), b.into())))
}

/// `γ ∈ ℤ²` lies in the integer span of the rows of `basis`.
fn in_span(basis: &[Vec<i64>], g: [i64; 2]) -> bool {
    match basis.len() {
        0 => g == [0, 0],
        1 => {
            let b = &basis[0];
            let t = if b[0] != 0 { (g[0], b[0]) } else { (g[1], b[1]) };
            t.0 % t.1 == 0 && (0..2).all(|i| b[i] * (t.0 / t.1) == g[i])
        }
        _ => {
            let det = basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0];
            let x = g[0] * basis[1][1] - g[1] * basis[1][0];
            let y = basis[0][0] * g[1] - basis[0][1] * g[0];
            x % det == 0 && y % det == 0
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn torus_y_matches_brute_force(m in rational_form()) {
        let d = RootDatum::torus(2);
        let k = kappa_q(&m);
        let lv = Level::new(&d, k.iter().map(|r| r.iter().map(|x| Scalar::from_q(x.clone())).collect()).collect(), Vec::new()).unwrap();
        let y = torus_y(&d, &lv).unwrap();
        prop_assert_eq!(y.len(), 2);
        for a in -12i64..=12 {
            for b in -12i64..=12 {
                let kg = [0, 1].map(|i| k[i][0].clone() * Q::from_integer(a.into()) + k[i][1].clone() * Q::from_integer(b.into()));
                let member = kg.iter().all(|x| x.is_integer());
                prop_assert_eq!(in_span(&y, [a, b]), member, "γ = ({}, {})", a, b);
            }
        }
    }

    #[test]
    fn torus_y_index_is_the_denominator(a in 1i64..13, b in 1i64..13, sign in prop::bool::ANY) {
        prop_assume!(num_integer::gcd(a, b) == 1);
        let d = RootDatum::torus(1);
        let a = if sign { a } else { -a };
        let lv = Level::new(&d, vec![vec![Scalar::from_ratio(a, b)]], Vec::new()).unwrap();
        prop_assert_eq!(torus_y(&d, &lv).unwrap(), vec![vec![b]]);
        // Refining κ by an integer factor cannot enlarge Y.
        let lv2 = Level::new(&d, vec![vec![Scalar::from_ratio(a, 2 * b)]], Vec::new()).unwrap();
        let y2 = torus_y(&d, &lv2).unwrap()[0][0];
        prop_assert_eq!(y2 % b, 0);
    }
}

#[test]
fn shifted_simples_match_the_root_lattice() {
    // Adjoint presets use simple-root coordinates, so Q is the integral points.
    for p in ["PSL2", "PGL3", "PGL(4)", "SpinAdj(D4)"] {
        let d = RootDatum::preset(p).unwrap();
        let t = shifted_w_simples(&d, &Scalar::var("k"), 4).unwrap();
        let p1 = d.p1_plus();
        assert_eq!(t.rows.len(), d.dominant_p_weights(4).len());
        for r in &t.rows {
            assert!(is_integral(&qadd(&r.mu, &r.lambda)), "{p}: {:?}", r.mu);
            assert!(r.in_root_lattice);
            assert!(p1.contains(&r.lambda), "{p}");
        }
    }
}
