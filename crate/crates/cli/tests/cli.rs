use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use semiprimal::catalog;
use semiprimal::experiments::murskii_sample;
use semiprimal::lattice::detect_lattice;
use semiprimal::primality::{is_semi_primal, Route};
use semiprimal::variety::{quotient_functor, SemiprimalBase, VarietyAlgebra};

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn fixture(name: &str) -> String {
    dir().join("fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiprimal"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Runs in JSON mode; stdout must be exactly one JSON document.
fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut stream = serde_json::Deserializer::from_str(&stdout).into_iter::<Value>();
    let doc = stream.next().expect("one document").expect("valid JSON");
    assert!(stream.next().is_none(), "more than one JSON document");
    (out.status.code().unwrap(), doc)
}

/// Compares against `tests/golden/<name>.json`; SEMIPRIMAL_PIN=1 rewrites it.
fn golden(name: &str, value: &Value) {
    let path = dir().join("golden").join(format!("{name}.json"));
    let text = serde_json::to_string_pretty(value).unwrap() + "\n";
    if std::env::var_os("SEMIPRIMAL_PIN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let stored = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text, stored, "{name}");
}

fn l4_base() -> SemiprimalBase {
    SemiprimalBase::new(catalog::family("lukasiewicz", 4).unwrap()).unwrap()
}

#[test]
fn lukasiewicz_is_semi_primal_by_every_route() {
    let (code, v) = run_json(&["check", "semiprimal", &fixture("lukasiewicz4.json"), "--route", "all"]);
    assert_eq!(code, 0);
    assert_eq!(v["level"], "semi-primal");
    assert_eq!(v["routes"]["t_route"], true);
    assert_eq!(v["routes"]["square_route"], true);
    assert_eq!(v["routes"]["discriminator_route"], true);

    let a = catalog::family("lukasiewicz", 4).unwrap();
    let r = detect_lattice(&a, None).unwrap();
    let direct = serde_json::to_value(is_semi_primal(&a, &r, Route::All).unwrap()).unwrap();
    for (k, val) in direct.as_object().unwrap() {
        assert_eq!(&v[k], val, "{k}");
    }
    golden("check_lukasiewicz4", &v);
}

#[test]
fn r_5_1_17_fails_with_an_internal_isomorphism() {
    let (code, v) = run_json(&["check", "semiprimal", &fixture("R_5_1_17.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"]["kind"], "internal-isomorphism");
    golden("check_R_5_1_17", &v);

    let out = run(&["check", "semiprimal", &fixture("R_5_1_17.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("not semi-primal"), "{text}");
    assert!(text.contains("internal isomorphism"), "{text}");
}

#[test]
fn primal_check() {
    let (code, v) = run_json(&["check", "primal", &fixture("post2.json")]);
    assert_eq!((code, v["level"].as_str()), (0, Some("primal")));
    let (code, _) = run_json(&["check", "primal", &fixture("lukasiewicz4.json")]);
    assert_eq!(code, 1);
}

#[test]
fn algebra_round_trip_is_verified() {
    let l4 = fixture("lukasiewicz4.json");
    let out = run(&["roundtrip", "algebra", &fixture("L2xL4.json"), "--base", &l4]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("iso verified"));
    let (code, v) = run_json(&["roundtrip", "space", &fixture("three_points.json"), "--base", &l4]);
    assert_eq!(code, 0);
    assert_eq!(v["verified"], true);
    golden("roundtrip_space", &v);
}

#[test]
fn dual_and_quotient_match_the_library() {
    let l4 = fixture("lukasiewicz4.json");
    let (code, sigma) = run_json(&["dual", &fixture("L2xL4.json"), "--base", &l4]);
    assert_eq!(code, 0);
    assert_eq!(sigma["points"], 2);
    golden("dual_L2xL4", &sigma);

    let (code, pi) = run_json(&["dual", &fixture("three_points.json"), "--base", &l4]);
    assert_eq!(code, 0);
    assert_eq!(pi["factors"], serde_json::json!([0, 1, 2]));

    let base = l4_base();
    let a = VarietyAlgebra::full_product(&base, &[1, 2]).unwrap();
    let q = quotient_functor(&a, &base, 1).unwrap();
    let (code, v) = run_json(&["quotient", &fixture("L2xL4.json"), "--base", &l4, "--sub", "0,2/4,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["factors"], serde_json::to_value(&q.algebra.factors).unwrap());
    assert_eq!(v["surjection"], serde_json::to_value(&q.surjection).unwrap());
}

#[test]
fn skeleton_and_adjoint_check() {
    let l4 = fixture("lukasiewicz4.json");
    let (code, v) = run_json(&["skeleton", &fixture("L2xL4.json"), "--base", &l4]);
    assert_eq!((code, v["atoms"].as_u64()), (0, Some(2)));
    let (code, v) = run_json(&["adjoint-check", &fixture("L2xL4.json"), "--base", &l4]);
    assert_eq!(code, 0);
    golden("adjoint_L2xL4", &v);
}

#[test]
fn catalog_build_matches_the_library() {
    let (code, v) = run_json(&["catalog", "build", "demorgan_D4"]);
    assert_eq!(code, 0);
    let direct = serde_json::to_value(catalog::build("demorgan_D4", None).unwrap()).unwrap();
    assert_eq!(v, direct);

    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("l4.json");
    let status = run(&["catalog", "build", "lukasiewicz", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(out).unwrap(),
        std::fs::read_to_string(fixture("lukasiewicz4.json")).unwrap()
    );
}

#[test]
fn murskii_report_matches_the_library() {
    let (code, v) = run_json(&[
        "experiments", "murskii", "--chain", "3", "--ops", "2", "--samples", "300", "--seed", "42",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v, serde_json::to_value(murskii_sample(3, &[2], 300, 42).unwrap()).unwrap());
    let (code, v) = run_json(&["experiments", "murskii", "--chain", "3", "--samples", "0"]);
    assert_eq!((code, v["exit_code"].as_i64()), (2, Some(2)));
    assert_eq!(v["error"], "empty sample");
}

#[test]
fn input_errors_name_the_offending_field() {
    let cases: [(&[&str], &str); 5] = [
        (&["check", "semiprimal", &fixture("bad_arity.json")], "ops[0].arity"),
        (&["dual", &fixture("bad_points.json"), "--base", &fixture("lukasiewicz4.json")], "points"),
        (&["check", "semiprimal", &fixture("lukasiewicz4.json"), "--route", "bogus"], "--route"),
        (&["skeleton", &fixture("L2xL4.json"), "--base", &fixture("R_5_1_17.json")], "--base"),
        (&["quotient", &fixture("L2xL4.json"), "--base", &fixture("lukasiewicz4.json"), "--sub", "0,1/4,1"], "--sub"),
    ];
    for (args, field) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(field), "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
    let out = run(&["check", "semiprimal", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(2));
}
