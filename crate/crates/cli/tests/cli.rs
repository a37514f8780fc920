use std::process::{Command, Output};

use serde_json::Value;

fn ffzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffzeta"))
        .args(args)
        .env("FFZETA_THREADS", "2")
        .output()
        .expect("spawn ffzeta")
}

fn json(args: &[&str]) -> Value {
    let out = ffzeta(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn coeffs(v: &Value) -> Vec<Vec<u64>> {
    serde_json::from_value(v["coeffs"].clone()).unwrap()
}

#[test]
fn zeta_poly_q2_minus_one() {
    let v = json(&["zeta-poly", "--p", "2", "--e", "1", "--n", "-1"]);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    for (i, t) in terms.iter().enumerate() {
        assert_eq!(t["exp"], serde_json::json!([i]));
        assert_eq!(coeffs(&t["coeff"]), vec![vec![1]]);
    }
}

#[test]
fn powersum_small() {
    assert_eq!(coeffs(&json(&["powersum", "--d", "1", "--n", "1"])), vec![vec![1]]);
    // q = 3, d = 1, n = 1: the sum over a monic of degree 1 of a is -(0+1+2) + 3 theta = 0
    let v = json(&["powersum", "--p", "3", "--d", "1", "--n", "1"]);
    assert!(coeffs(&v).is_empty());
}

#[test]
fn vadic_at_theta() {
    let v = json(&["vadic", "--n", "-1", "--P", "[0,1]"]);
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn polynomial_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, "[1,1]").unwrap();
    let from_file = json(&["vadic", "--n", "-2", "--P", path.to_str().unwrap()]);
    let inline = json(&["vadic", "--n", "-2", "--P", "[1,1]"]);
    assert_eq!(from_file, inline);
}

#[test]
fn output_round_trips_and_is_deterministic() {
    let args = ["mzv", "--p", "3", "--indices", "-1,-2", "--mode", "weak"];
    let a = ffzeta(&args);
    let b = ffzeta(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let again = serde_json::to_string(&v).unwrap();
    assert_eq!(again.trim(), String::from_utf8_lossy(&a.stdout).trim());
}

#[test]
fn sequential_matches_parallel() {
    let args = ["zeta-poly", "--p", "3", "--n", "-5", "--s", "1"];
    let par = ffzeta(&args);
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let seq = ffzeta(&seq_args);
    assert_eq!(par.stdout, seq.stdout);
}

#[test]
fn csv_output() {
    let out = ffzeta(&["zeta-poly", "--n", "-3", "--s", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("exponent,coefficient"));
    assert_eq!(lines.count(), 9);
}

#[test]
fn describe_prints_schema() {
    let out = ffzeta(&["mk", "--describe"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["subcommand"], "mk");
    assert!(v["output"]["digit_bound"].is_string());
    assert_eq!(ffzeta(&["--describe"]).status.code(), Some(2));
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(ffzeta(&["powersum", "--bogus"]).status.code(), Some(2));
    assert_eq!(ffzeta(&["vadic", "--n", "-1", "--P", "[0,0,1]"]).status.code(), Some(2));
    assert_eq!(ffzeta(&["powersum", "--p", "4", "--d", "1", "--n", "1"]).status.code(), Some(2));
    assert_eq!(ffzeta(&["vadic", "--n", "-1", "--P", "{not json"]).status.code(), Some(2));
}

#[test]
fn short_exponent_exits_3() {
    let out = ffzeta(&["zeta-eval", "--x", r#"{"val":0,"prec":null,"coeffs":[[1]]}"#, "--neg-y-digits", "1,0,1", "--prec", "100"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("certif"));
}

#[test]
fn verify_thresholds_clean() {
    let v = json(&["verify", "thresholds"]);
    assert_eq!(v["violations"], 0);
}

#[test]
fn verify_charsum_small() {
    let v = json(&["verify", "charsum", "--seed", "7", "--trials", "3", "--dim-max", "3"]);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["violations"], 0);
}
