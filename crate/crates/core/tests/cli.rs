use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn arith(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arith")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn temp_theory(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("arith-cli-{}-{name}.theory", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn classify_reports_level_and_nnf() {
    let out = arith(&["classify", "A x. E y. x < y"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["header"]["schema_version"], 1);
    let o = &v["outputs"];
    assert_eq!((o["level_kind"].as_str(), o["level_index"].as_u64()), (Some("Pi"), Some(2)));
    assert_eq!(o["is_delta"], false);
    assert!(o["nnf"].as_str().unwrap().starts_with("A x. E y."));
}

#[test]
fn encode_and_decode_round_trip() {
    let out = arith(&["encode", "0 = 0"]);
    assert_eq!(out.status.code(), Some(0));
    let code = json(&out)["outputs"]["code"].as_str().unwrap().to_string();
    assert_eq!(code, "210");
    let back = arith(&["decode", &code]);
    assert_eq!(json(&back)["outputs"]["formula"], "0 = 0");
}

#[test]
fn output_is_deterministic() {
    for args in [&["goedel"][..], &["emit", "axioms-star", "--n", "1"], &["classify", "E x. x = x"]] {
        let a = arith(args);
        let b = arith(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn omega_consistency_emission() {
    let v = json(&arith(&["emit", "omega-con-q"]));
    assert_eq!(v["outputs"]["level_kind"], "Pi");
    assert_eq!(v["outputs"]["level_index"], 3);
}

#[test]
fn eval_verdicts() {
    let v = json(&arith(&["eval", "E x. x + x = S(S(0))"]));
    assert_eq!(v["outputs"]["verdict"], "True");
    let v = json(&arith(&["--witness-bound", "5", "eval", "A x. x + 0 = x"]));
    assert_eq!(v["outputs"]["verdict"], "Unknown");
}

#[test]
fn text_format() {
    let out = arith(&["--format", "text", "--no-header", "decode", "210"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 = 0"));
}

#[test]
fn exit_codes() {
    assert_eq!(arith(&["frobnicate"]).status.code(), Some(2));
    let bad = arith(&["classify", "0 = "]);
    assert_eq!(bad.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert_eq!(
        (err["status"].as_str(), err["error"].as_str(), err["exit_code"].as_i64()),
        (Some("error"), Some("parse"), Some(3))
    );
    assert_eq!(arith(&["decode", "17"]).status.code(), Some(3));
    // Q is a finite list, so Craig's construction does not apply.
    let q = temp_theory("q", "theory q0\nextends q\n");
    assert_eq!(arith(&["craig", "--theory", q.to_str().unwrap()]).status.code(), Some(4));
    let s2 = temp_theory("s2", "theory s2\naxioms-formula E y. A z. (z = z & x = y)\n");
    assert_eq!(arith(&["rosser", "--theory", s2.to_str().unwrap(), "--n", "0"]).status.code(), Some(4));
    assert_eq!(arith(&["prove", "S(0) = 0", "--depth", "3", "--nodes", "200"]).status.code(), Some(5));
}

#[test]
fn prove_and_audit() {
    let v = json(&arith(&["prove", "S(0) + S(0) = S(S(0))", "--q"]));
    assert!(v["outputs"]["steps"].as_u64().unwrap() > 1);
    assert!(v["outputs"]["proof"].is_string() || v["outputs"]["proof"].is_array());
    let t = temp_theory("bad", "theory bad\nextends q\naxiom E x. x + x = S(0)\n");
    let v = json(&arith(&["audit", "--theory", t.to_str().unwrap(), "--budget", "8"]));
    assert_eq!(v["outputs"]["result"], "violation");
}
