//! End-to-end runs of the binary: exit codes, JSON shapes and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trilevel")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn worked_example_exits_zero() {
    let out = run(&["example-kx2", "--p", "2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("(f) holds"));
    let out = run(&["example-kx2", "--p", "3", "--n", "3", "--json"]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["checks"].as_array().unwrap().len(), 6);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn no_instances_give_an_empty_passing_report() {
    let out = run(&["verify-verdier", "--instances", "0", "--json"]);
    assert!(out.status.success());
    assert_eq!(json(&out), Value::Array(vec![]));
}

#[test]
fn generated_reports_have_one_record_per_check() {
    let out = run(&["verify-verdier", "--instances", "2", "--ring", "F3[x,y]/(x2,y2)", "--max-rank", "2", "--max-amplitude", "1", "--json"]);
    assert!(out.status.success());
    let records = json(&out);
    let records = records.as_array().unwrap();
    assert_eq!(records.len(), 4);
    for r in records {
        for field in ["name", "index", "status", "anchor", "summary", "elapsed_ms"] {
            assert!(r.get(field).is_some(), "missing {field}");
        }
    }
}

#[test]
fn squares_from_bundles() {
    let out = run(&["check-square", "--input", &data("square_identity.json"), "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert!(v["connecting_morphism"].is_object());
    let out = run(&["check-square", "--input", &data("square_extra_summand.json"), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["cartesian"], false);
}

#[test]
fn triangles_from_bundles() {
    let out = run(&["check-triangle", "--input", &data("triangle_identity.json"), "--json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["exact"], true);
    let out = run(&["check-triangle", "--input", &data("triangle_zero_map.json"), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["comparison_is_quasi_iso"], false);
}

#[test]
fn input_errors_are_reported_with_context() {
    let out = run(&["check-square", "--input", &data("missing.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
    let dir = std::env::temp_dir().join(format!("trilevel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\n  \"algebra\": \"F2[x]/(x2)\",\n  \"maps\": [\n").unwrap();
    let out = run(&["check-triangle", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    let out = run(&["check-triangle", "--input", &data("koszul.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn level_certificates_from_inputs() {
    let out = run(&["level-witness", "--mode", "koszul", "--input", &data("koszul.json"), "--json"]);
    assert!(out.status.success());
    let c = json(&out);
    assert_eq!(c["verified"], true);
    assert_eq!(c["bound"], 3);
    assert_eq!(c["layers"].as_array().unwrap().len(), c["triangles"].as_array().unwrap().len());
    let out = run(&["level-witness", "--mode", "loewy", "--input", &data("residue_field.json"), "--json"]);
    assert_eq!(json(&out)["bound"], 1);
    let out = run(&["level-witness", "--mode", "resolution", "--input", &data("residue_field.json"), "--json"]);
    let r = json(&out);
    assert_eq!(r["ranks"], serde_json::json!([1, 1, 1, 1, 1, 1]));
    assert_eq!(r["projective_dimension"], serde_json::json!({ "Unknown": 5 }));
}

#[test]
fn random_certificates_verify() {
    for mode in ["tensor", "koszul", "loewy", "resolution"] {
        let out = run(&["level-witness", "--mode", mode, "--instances", "3", "--ring", "F2[x,y]/(x2,y2)", "--max-rank", "2", "--max-amplitude", "1", "--json"]);
        assert!(out.status.success(), "{mode}");
        assert_eq!(json(&out).as_array().unwrap().len(), 3);
    }
}

#[test]
fn output_goes_to_the_requested_file() {
    let path = std::env::temp_dir().join(format!("trilevel-out-{}.json", std::process::id()));
    let out = run(&["example-kx2", "--json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["characteristic"], 2);
    std::fs::remove_file(path).unwrap();
}

fn without_timings(mut v: Value) -> Value {
    for r in v.as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("elapsed_ms");
    }
    v
}

#[test]
fn selftest_is_deterministic() {
    let a = run(&["selftest", "--seed", "7", "--json"]);
    let b = run(&["selftest", "--seed", "7", "--json"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert!(b.status.success());
    let (a, b) = (without_timings(json(&a)), without_timings(json(&b)));
    assert!(a.as_array().unwrap().len() > 1000);
    assert_eq!(a, b);
}
