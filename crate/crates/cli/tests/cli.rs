use cdo_cli::run;
use cdo_core::charring::GradedCharacter;
use cdo_core::convolution::{normalize, parse_expr};
use cdo_core::dsred::ReductionResult;
use cdo_core::rootdata::RootDatum;
use cdo_core::spectralflow::ModuleLabel;

fn cdo(args: &[&str]) -> cdo_cli::Output {
    run(std::iter::once("cdo").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> String {
    let o = cdo(args);
    assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
    o.stdout
}

#[test]
fn golden_dual_level() {
    assert_eq!(ok(&["levels", "dual", "--group", "SL2", "--k", "k"]), "(-k-4)\n");
}

#[test]
fn golden_twisted_reduction_vanishes() {
    let out = ok(&["ds", "reduce", "--group", "PSL2", "--gamma", "-1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["degree"], serde_json::Value::Null);
    assert_eq!(v["payload"], "Zero");
}

#[test]
fn golden_shifted_convolution() {
    assert_eq!(ok(&["conv", "D[k] . D[1]@k00"]), "D[k,1]\n");
}

#[test]
fn parse_errors_exit_2_with_caret() {
    let o = cdo(&["conv", "D[k] . X[1]"]);
    assert_eq!(o.code, 2);
    let lines: Vec<&str> = o.stderr.lines().collect();
    assert_eq!(lines[1], "  D[k] . X[1]");
    assert_eq!(lines[2], "         ^");
    let o = cdo(&["levels", "offset", "--lambda", "1,x/"]);
    assert_eq!(o.code, 2, "{}", o.stderr);
    assert_eq!(cdo(&["levels", "frobnicate"]).code, 2);
}

#[test]
fn precondition_errors_exit_1() {
    let o = cdo(&["ds", "reduce", "--lambda", "-1"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("dominant integral"), "{}", o.stderr);
    let o = cdo(&["fle", "satake", "--k", "3"]);
    assert_eq!(o.code, 1);
    let o = cdo(&["ds", "reduce", "--lambda", "-1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(o.stderr.trim()).unwrap();
    assert_eq!(v["error"], "precondition");
    assert_eq!(v["invariant"], "dominant integral");
}

#[test]
fn json_round_trips() {
    let d = RootDatum::preset("SL3").unwrap();
    let out = ok(&["ds", "reduce", "--group", "SL3", "--lambda", "1,0", "--gamma", "1,1", "--json"]);
    let r = ReductionResult::from_json(&d, out.trim()).unwrap();
    assert_eq!(r.degree, Some(4));
    assert_eq!(r.to_json(), out.trim());

    let out = ok(&["char", "weyl", "--group", "SL2", "--lambda", "1", "--trunc", "3", "--json"]);
    let c = GradedCharacter::from_json(out.trim()).unwrap();
    assert_eq!(c.to_json(), out.trim());

    let sl2 = RootDatum::preset("SL2").unwrap();
    let out = ok(&["conv", "W[k] . V[k, w(3)]", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let label = ModuleLabel::parse(&sl2, v["label"].as_str().unwrap()).unwrap();
    let nf = normalize(&sl2, &parse_expr(&sl2, "W[k] . V[k, w(3)]").unwrap()).unwrap();
    assert_eq!(Some(&label), nf.label());
    assert_eq!(v["normal"], nf.render(&sl2));

    let out = ok(&["conv", "D[k] . D[1]@k00", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let text = v["normal"].as_str().unwrap();
    let again = normalize(&sl2, &parse_expr(&sl2, text).unwrap()).unwrap();
    assert_eq!(again.render(&sl2), text);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["char", "cdo", "--group", "SL2", "--trunc", "2", "--cutoff", "2", "--json"][..],
        &["fle", "table", "--group", "PSL2", "--cutoff", "3"][..],
        &["torus", "descent", "--kappa", "2,1;1,3", "--gammas", "1,0;0,-1", "--seed", "5"][..],
    ] {
        assert_eq!(ok(args), ok(args));
    }
}

#[test]
fn torus_verbs() {
    let spec = ok(&["torus", "spec", "--kappa", "3/2", "--gammas", "1;-2", "--window", "0"]);
    assert!(spec.contains("[[sector]]"));
    assert_eq!(ok(&["torus", "classify", "--kappa", "3/2", "--gammas", "1;-2;1", "--json"]), "[[-2],[1],[1]]\n");
    let out = ok(&["torus", "relations", "--kappa", "3/2", "--alpha", "1", "--degree", "1"]);
    assert!(out.ends_with("identities hold\n"), "{out}");
    let o = cdo(&["torus", "classify", "--kappa", "3/2", "--gammas", "1,0"]);
    assert_eq!(o.code, 1);
}

#[test]
fn datum_and_dual() {
    let out = ok(&["datum", "--group", "PSL2"]);
    assert!(out.contains("simple roots: [[1]]"), "{out}");
    let out = ok(&["dual", "--group", "PSL2"]);
    assert!(out.contains("simple roots: [[2]]"), "{out}");
    let o = cdo(&["datum", "--group", "XYZ"]);
    assert_eq!(o.code, 1);
}

#[test]
fn level_and_fle_verbs() {
    assert_eq!(ok(&["levels", "shift", "--group", "SL2", "--n", "1"]), "(-k)/(k+1)\n");
    assert_eq!(ok(&["fle", "y", "--group", "T1", "--k", "3/2"]), "[[2]]\n");
    assert_eq!(ok(&["fle", "y", "--group", "T1"]), "0\n");
    let out = ok(&["fle", "shifted", "--group", "PSL2", "--cutoff", "1"]);
    assert!(out.starts_with("level: (-2k-1)/(k+1)"), "{out}");
    assert_eq!(ok(&["ds", "twist", "--group", "SL3", "--mu", "1,1", "--json"]), "{\"charge_shift\":-4,\"coweight\":[\"1\",\"1\"],\"fermions\":[-1,-1,-2]}\n");
}

#[test]
fn check_verb() {
    let out = ok(&["check", "10"]);
    assert!(out.starts_with("PASS 10"), "{out}");
    assert_eq!(cdo(&["check", "14"]).code, 1);
}
