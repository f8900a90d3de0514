use std::process::{Command, Output};

use serde_json::Value;

fn jtl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jtl")).args(args).env_remove("JTL_TRUNC_MAX").output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = jtl(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

const CONJUGATION: &str = r#"{"images":{"g1":["g2","g1","-g2"],"g2":["g2"]},
    "inverse_images":{"g1":["-g2","g1","g2"],"g2":["g2"]},"trunc":4}"#;

#[test]
fn dim_h_genus_one_degree_eight() {
    let r = report(&["dim-h", "--genus", "1", "--degree", "8"]);
    assert_eq!(r["command"], "dim-h");
    assert_eq!(r["result"], serde_json::json!({ "dim": 13 }));
    assert!(r["timing_ms"].is_u64());
}

#[test]
fn invariants_of_builtins() {
    let value =
        |name: &str, tree: &str| report(&["eval-invariant", "--name", name, "--tree", tree])["result"]["value"].clone();
    assert_eq!(value("I2", "builtin:dehn-twist"), "6");
    assert_eq!(value("I6", "builtin:caterpillar-6"), "72");
    assert_eq!(value("I10_3", "builtin:xi3"), "150");
    let inline = r#"{"caterpillar":["a1","b1","a1","b1","a1","b1","a1","b1"]}"#;
    assert_eq!(value("I6", inline), "72");
}

#[test]
fn check_suite_passes_and_is_deterministic() {
    let args = ["check", "--suite", "trace-cocycle", "--trials", "50", "--seed", "7"];
    let a = jtl(&args);
    assert_eq!(a.status.code(), Some(0));
    let b = jtl(&["--threads", "1", "check", "--suite", "trace-cocycle", "--trials", "50", "--seed", "7"]);
    let parse = |o: &Output| without_timing(serde_json::from_slice(&o.stdout).unwrap());
    assert_eq!(parse(&a), parse(&b));
    assert_eq!(parse(&a)["result"]["passed"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(jtl(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(jtl(&["dim-h", "--genus", "1"]).status.code(), Some(2));
    assert_eq!(jtl(&["dim-h", "--genus", "x", "--degree", "2"]).status.code(), Some(2));
    for args in [
        &["trace", "--derivation", "{not json"][..],
        &["trace", "--derivation", "/no/such/file.json"],
        &["dim-h", "--genus", "0", "--degree", "2"],
        &["tau", "--aut", CONJUGATION, "--degree", "2"],
        &["mag", "--aut", CONJUGATION, "--ideal", "1"],
        &["eval-invariant", "--name", "I4", "--tree", "builtin:xi1"],
        &["eval-invariant", "--name", "I2", "--tree", "builtin:xi1"],
        &["check", "--suite", "unknown"],
    ] {
        let out = jtl(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error: "));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn truncation_guard() {
    let out = Command::new(env!("CARGO_BIN_EXE_jtl"))
        .args(["expansion", "--genus", "1", "--trunc", "6"])
        .env("JTL_TRUNC_MAX", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("JTL_TRUNC_MAX=5"));
}

#[test]
fn mag_ldet_and_trace_agree_for_conjugation() {
    // Conjugation by g2 induces ad-type Ab with trace -x2; ldet(mag) matches it.
    let ab = report(&["ab", "--aut", CONJUGATION])["result"].clone();
    let trace = report(&["trace", "--derivation", &ab.to_string()])["result"].clone();
    let matrix = report(&["mag", "--aut", CONJUGATION, "--ideal", "2"])["result"].clone();
    assert_eq!(matrix["m"], 2);
    assert_eq!(matrix["trunc"], 3);
    let ldet = report(&["ldet", "--matrix", &matrix.to_string()])["result"].clone();
    let expected = serde_json::json!({ "terms": [{ "word": ["g2"], "coeff": "-1" }] });
    assert_eq!(ldet, expected);
    assert_eq!(trace["terms"][0], expected["terms"][0]);
    let det = report(&["det", "--matrix", &matrix.to_string()])["result"].clone();
    assert_eq!(det["terms"][1], serde_json::json!({ "word": ["g2"], "coeff": "-1" }));
}

#[test]
fn expansion_report_shape() {
    let r = report(&["expansion", "--genus", "2", "--trunc", "3"])["result"].clone();
    assert_eq!(r["N"], 3);
    assert_eq!(r["alpha"].as_array().unwrap().len(), 2);
    assert_eq!(r["beta"][1]["alphabet"], serde_json::json!(["a1", "a2", "b1", "b2"]));
}

#[test]
fn reports_are_byte_identical_without_timing() {
    let args = ["h1-invariants", "--genus", "1", "--degree", "6"];
    let a = without_timing(report(&args));
    assert_eq!(a["result"]["multiplicity"], 1);
    assert_eq!(a.to_string(), without_timing(report(&args)).to_string());
}

#[test]
fn stdin_input() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_jtl"))
        .args(["itr", "--derivation", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let d = r#"{"images":{"x1":{"alphabet":["x1","x2"],"trunc":3,"terms":[{"word":["x1","x2"],"coeff":"1/2"},{"word":["x2","x1"],"coeff":"-1/2"}]},
        "x2":{"alphabet":["x1","x2"],"trunc":3,"terms":[]}}}"#;
    child.stdin.take().unwrap().write_all(d.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"], serde_json::json!({ "terms": [{ "word": ["x2"], "coeff": "1/2" }] }));
}
