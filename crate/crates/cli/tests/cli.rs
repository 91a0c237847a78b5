use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperzeta"))
        .args(args)
        .output()
        .expect("spawn hyperzeta")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|c| c.as_i64().expect("integer coefficient"))
        .collect()
}

fn cover_args(prefix: &str) -> Vec<String> {
    vec![
        "--hypergraph".into(),
        fixture(&format!("{prefix}_Y.json")),
        "--action".into(),
        fixture(&format!("{prefix}_action.json")),
    ]
}

fn run_cover(cmd: &str, prefix: &str, extra: &[&str]) -> Output {
    let mut args: Vec<String> = vec![cmd.into()];
    args.extend(cover_args(prefix));
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    run(&refs)
}

fn transcript(name: &str) -> String {
    std::fs::read_to_string(root().join("crates/cli/tests/transcripts").join(name))
        .expect("transcript file")
}

#[test]
fn quotient_running_matches_transcript() {
    let out = run_cover("quotient", "running", &[]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), transcript("quotient_running.json"));
}

#[test]
fn quotient_small_has_two_edges() {
    let out = run_cover("quotient", "small", &[]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["quotient"]["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(v["quotient"]["edges"].as_array().unwrap().len(), 2);
    assert_eq!(v["projection"]["vertices"]["v2"], "v1");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), transcript("quotient_small.json"));
}

#[test]
fn verify_cover_accepts_running() {
    let base = fixture("running_X.json");
    let out = run_cover("verify-cover", "running", &["--base", &base]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["all_pass"], true);
}

#[test]
fn broken_action_is_rejected_with_witness() {
    let out = run(&[
        "verify-cover",
        "--hypergraph",
        &fixture("running_Y.json"),
        "--action",
        &fixture("broken_action.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(err["error"], "not-automorphism");
    assert_eq!(err["witness"]["generator"], "g");
}

#[test]
fn zeta_of_small_base() {
    let out = run(&["zeta", "--hypergraph", &fixture("small_X.json")]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(ints(&v["reciprocal_coeffs"]), [1, 0, -2, 0, 1]);
    assert_eq!(v["method"], "edge-det");
    assert_eq!(v["identity_checks"]["edge_det_equals_three_term"], true);
}

#[test]
fn zeta_series_methods_agree_with_determinant() {
    for method in ["euler", "euler-census", "trace-exp"] {
        let out = run(&[
            "zeta",
            "--hypergraph",
            &fixture("running_X.json"),
            "--method",
            method,
            "--truncate",
            "10",
        ]);
        assert!(out.status.success(), "{method}");
        let v = json_of(&out);
        assert_eq!(v["truncation"], 10);
        assert_eq!(
            ints(&v["reciprocal_coeffs"]),
            [1, 0, -2, -4, 1, 4, 4, 0, -4, 0, 0],
            "{method}"
        );
        assert_eq!(v["identity_checks"]["matches_determinant"], true);
    }
}

#[test]
fn lfunction_sign_on_running() {
    let rep = fixture("sign.json");
    let out = run_cover("lfunction", "running", &["--rep", &rep]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(ints(&v["reciprocal_coeffs"]), [1, 0, -2, 4, 1, -4, 4, 0, -4]);
    assert_eq!(v["identity_checks"]["transfer"], true);
    assert_eq!(v["group_order"], 2);
}

#[test]
fn lfunction_text_matches_transcript() {
    let rep = fixture("sign.json");
    let out = run_cover("lfunction", "running", &["--rep", &rep, "--format", "text"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), transcript("lfunction_sign.txt"));
}

#[test]
fn lfunction_trace_exp_truncated() {
    let rep = fixture("sign.json");
    let out = run_cover(
        "lfunction",
        "running",
        &["--rep", &rep, "--method", "trace-exp", "--truncate", "12"],
    );
    assert!(out.status.success());
    let v = json_of(&out);
    let mut expected = vec![1, 0, -2, 4, 1, -4, 4, 0, -4];
    expected.resize(13, 0);
    assert_eq!(ints(&v["reciprocal_coeffs"]), expected);
}

#[test]
fn primes_of_small_cover() {
    let out = run(&[
        "primes",
        "--hypergraph",
        &fixture("small_Y.json"),
        "--max-len",
        "4",
    ]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["count"], 2);
    for c in v["classes"].as_array().unwrap() {
        assert_eq!(c["length"], 4);
    }
}

#[test]
fn sheets_match_transcript() {
    let out = run_cover("sheets", "running", &[]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), transcript("sheets_running.json"));
}

#[test]
fn sheets_accept_explicit_tree() {
    let out = run_cover(
        "sheets",
        "small",
        &[
            "--tree",
            "v1:e3,v1:e1,v3:e3,v5:e1",
            "--base-vertex",
            "v1",
            "--base-lift",
            "v1",
        ],
    );
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["tree"].as_array().unwrap().len(), 4);
    assert_eq!(v["sheets"].as_array().unwrap().len(), 2);
}

#[test]
fn factor_check_passes() {
    let irreps = fixture("irreps.json");
    let out = run_cover("factor-check", "running", &["--irreps", &irreps]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["all_pass"], true);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), transcript("factor_check_running.json"));
}

#[test]
fn unknown_method_is_a_usage_error() {
    let out = run(&["zeta", "--hypergraph", &fixture("running_X.json"), "--method", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = run(&["zeta", "--graph", "/nonexistent/graph.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "io");
}

#[test]
fn output_is_deterministic() {
    let irreps = fixture("irreps.json");
    let a = run_cover("factor-check", "running", &["--irreps", &irreps]);
    let b = run_cover("factor-check", "running", &["--irreps", &irreps]);
    assert_eq!(a.stdout, b.stdout);
}
