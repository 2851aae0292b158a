mod common;

use std::process::Command;

use common::data;
use serde_json::Value;

fn hhcap(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hhcap")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out) = hhcap(&all);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn path(name: &str) -> String {
    data(name).display().to_string()
}

#[test]
fn validate_reports() {
    let (code, v) = json(&["validate", &path("dual_numbers.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["files"][0]["valid"], true);

    let (code, v) = json(&["validate", &path("not_associative.json")]);
    assert_eq!(code, 1);
    assert!(v["files"][0]["error"].as_str().unwrap().contains("Associativity"));

    let (code, v) = json(&["validate", &path("morita_dual.json")]);
    assert_eq!(code, 0);
    assert!(v["files"][0]["checks"].as_array().unwrap().iter().all(|c| c["status"] == "passed"));
}

#[test]
fn hochschild_dimensions() {
    let dims = |args: &[&str]| {
        let (code, v) = json(args);
        assert_eq!(code, 0);
        v["dims"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect::<Vec<_>>()
    };
    assert_eq!(dims(&["hh", &path("dual_numbers.json")]), [2, 1, 1, 1]);
    assert_eq!(dims(&["hh", &path("dual_numbers_f2.json"), "--cohomology"]), [2, 2, 2, 2]);
    assert_eq!(dims(&["hh", &path("dual_numbers.json"), "--field", "F2"]), [2, 2, 2, 2]);
    assert_eq!(dims(&["hh", &path("matrices_2x2.json"), "--cohomology", "--max-degree", "3"]), [1, 0, 0]);
}

#[test]
fn products_on_dual_numbers() {
    let (code, v) = json(&["cap", &path("dual_numbers.json"), "--f", "0:1,0", "--z", "1:1"]);
    assert_eq!(code, 0);
    assert_eq!(v["class"], serde_json::json!(["1"]));
    let (code, v) = json(&["cup", &path("dual_numbers_f2.json"), "--f", "1:0,1", "--g", "1:0,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["degree"], 2);
}

#[test]
fn verify_theorem_exit_codes() {
    assert_eq!(hhcap(&["verify-theorem", &path("identity_dual.json")]).0, 0);
    assert_eq!(hhcap(&["verify-theorem", &path("morita_dual.json")]).0, 0);
    assert_eq!(hhcap(&["verify-theorem", &path("apr_tilting.json")]).0, 0);
    let (code, v) = json(&["verify-theorem", &path("apr_corrupted.json")]);
    assert_eq!(code, 1);
    assert!(v["first_failure"].as_str().unwrap().starts_with("datum check"));
    assert_eq!(hhcap(&["verify-theorem", &path("identity_dual_corrupted.json")]).0, 1);
}

#[test]
fn input_errors_and_refusals() {
    assert_eq!(hhcap(&["hh", &path("missing.json")]).0, 2);
    assert_eq!(hhcap(&["validate", &path("dual_free2.json"), &path("missing.json")]).0, 2);
    assert_eq!(hhcap(&["cap", &path("dual_numbers.json"), "--f", "2:1", "--z", "1:1"]).0, 2);
    assert_eq!(hhcap(&["cap", &path("dual_numbers.json"), "--f", "1:1", "--z", "1:1,1"]).0, 2);
    assert_eq!(hhcap(&["cap", &path("dual_numbers.json"), "--f", "1:1", "--z", "5:1"]).0, 3);
    assert_eq!(hhcap(&["transport", &path("morita_dual.json"), "--degree", "3"]).0, 3);
    assert_eq!(hhcap(&["hh", &path("dual_numbers.json"), "--budget", "10"]).0, 3);
}

#[test]
fn output_is_deterministic() {
    for format in ["text", "json"] {
        let args = ["verify-theorem", &path("morita_dual.json"), "--seed", "11", "--format", format];
        assert_eq!(hhcap(&args), hhcap(&args));
    }
}
