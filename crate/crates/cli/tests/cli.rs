use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chernpos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_chernpos"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn schur_verify_random_instance_passes() {
    let out = run(&["schur", "verify", "--random", "--n", "3", "--r", "3", "--m", "3", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["pass"], true);
    let run0 = &v["runs"][0];
    assert_eq!(run0["distribution"]["seed"], 42);
    assert_eq!(run0["instance_hash"].as_str().unwrap().len(), 64);
    assert_eq!(run0["report"]["entries"].as_array().unwrap().len(), 6);
}

#[test]
fn reports_are_deterministic() {
    let args = ["schur", "verify", "--random", "--instances", "3", "--seed", "9", "--mode", "float"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn embedded_instances_reproduce_the_verdict() {
    for mode in ["exact", "float"] {
        let first = run(&["schur", "verify", "--random", "--instances", "2", "--seed", "5", "--mode", mode]);
        assert_eq!(first.status.code(), Some(0));
        let again = run_with_stdin(&["schur", "verify", "--instance", "-", "--mode", mode], &first.stdout);
        assert_eq!(again.status.code(), Some(0), "{}", stderr(&again));
        let (a, b) = (json(&first), json(&again));
        for j in 0..2 {
            assert_eq!(a["runs"][j]["instance_hash"], b["runs"][j]["instance_hash"]);
            assert_eq!(a["runs"][j]["report"], b["runs"][j]["report"]);
        }
    }
}

#[test]
fn model_bounds_table_for_cp3() {
    let out = run(&["model", "bounds", "--model", "CP3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["lower"], 4);
    assert_eq!(v["upper"], 64);
    let values: Vec<i64> = v["numbers"].as_array().unwrap().iter().map(|e| e["value"].as_i64().unwrap()).collect();
    assert_eq!(values, vec![4, 24, 64]);
    let text = run(&["model", "bounds", "--model", "CP3", "--output", "text"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("0 <= 4 <= {4, 24, 64} <= 64"));
}

#[test]
fn model_rr_canonical_line_on_cp1() {
    let out = run(&["model", "rr", "--model", "CP1", "--line", "K", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["values"][0]["chi"], -5);
    assert_eq!(v["kodaira_leading"], "-2");
}

#[test]
fn model_rr_range_on_cp2() {
    let out = run(&["model", "rr", "--model", "CP2", "--line", "O(1)", "--m", "-5..5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for row in v["values"].as_array().unwrap() {
        let m = row["m"].as_i64().unwrap();
        assert_eq!(row["chi"].as_i64().unwrap(), (m + 1) * (m + 2) / 2);
    }
}

#[test]
fn product_models_and_signed_bounds() {
    let out = run(&["model", "chern-numbers", "--model", "CP1xCP1"]);
    let v = json(&out);
    let values: Vec<i64> = v["numbers"].as_array().unwrap().iter().map(|e| e["value"].as_i64().unwrap()).collect();
    assert_eq!(values, vec![4, 8]);
    assert_eq!(run(&["model", "bounds", "--model", "T2", "--signed"]).status.code(), Some(0));
    let rejected = run(&["model", "bounds", "--model", "CP2", "--signed"]);
    assert_eq!(rejected.status.code(), Some(2));
}

#[test]
fn schur_table_lists_partitions() {
    let out = run(&["schur", "table", "--i", "3", "--r", "3"]);
    let v = json(&out);
    let rows = v["partitions"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["schur"], "c1^3 - 2*c1*c2 + c3");
}

#[test]
fn malformed_inputs_exit_2_with_field_pointer() {
    let bad = br#"{"n": 2, "r": 1, "m": 1, "T": [[[{"re": 1}]], [[{"re": "x"}]]]}"#;
    let out = run_with_stdin(&["schur", "verify", "--instance", "-"], bad);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("T[1][0][0]"), "{}", stderr(&out));

    let shape = br#"{"n": 2, "r": 1, "m": 1, "T": [[[{"re": 1}]]]}"#;
    let out = run_with_stdin(&["schur", "verify", "--instance", "-"], shape);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`instance.T`"), "{}", stderr(&out));

    let out = run(&["model", "chern-numbers", "--model", "Q2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("model"));

    assert_eq!(run(&["schur", "verify", "--random", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["model", "rr", "--model", "CP1", "--m", "a..b"]).status.code(), Some(2));
}

#[test]
fn failing_form_check_exits_1_with_witness() {
    // -√−1 dz1∧dz̄1 is nonpositive.
    let form = br#"{"n": 1, "terms": [{"dz": [1], "dzbar": [1], "re": 0, "im": -1}]}"#;
    let out = run_with_stdin(&["forms", "eval", "--form", "-", "--trials", "5"], form);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"]["pass"], false);
    assert_eq!(v["verdict"]["witness"].as_array().unwrap().len(), 1);
}

#[test]
fn forms_eval_on_given_vectors() {
    let form = br#"{"n": 2, "terms": [{"dz": [1], "dzbar": [1], "re": 0, "im": 1}]}"#;
    let dir = std::env::temp_dir().join(format!("chernpos-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let vectors = dir.join("vectors.json");
    std::fs::write(&vectors, br#"[[{"re": 2, "im": 1}, {"re": 0}]]"#).unwrap();
    let out = run_with_stdin(
        &["forms", "eval", "--form", "-", "--vectors", vectors.to_str().unwrap()],
        form,
    );
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    // √−1 dz∧dz̄ on X gives |X¹|² = 5.
    assert_eq!(json(&out)["value"]["re"], 5);
}

#[test]
fn curvature_build_emits_chern_forms_and_top_table() {
    let out = run(&["curvature", "build", "--random", "--n", "2", "--r", "2", "--m", "2", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let run0 = &v["runs"][0];
    assert_eq!(run0["witnessed"], true);
    assert_eq!(run0["chern_forms"].as_array().unwrap().len(), 2);
    for entry in run0["top_chern"].as_array().unwrap() {
        assert!(entry["top"]["value"].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn bounds_chain_on_random_instance() {
    let out = run(&["bounds", "chain", "--random", "--n", "3", "--r", "2", "--m", "2", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let chains = v["runs"][0]["chains"].as_array().unwrap();
    assert_eq!(chains.len(), 5);
    let one = run(&["bounds", "chain", "--random", "--n", "2", "--r", "2", "--m", "1", "--partition", "1,1"]);
    assert_eq!(one.status.code(), Some(0));
    let matrix = br#"{"n": 1, "r": 1, "omega": [[{"n": 1, "terms": [{"dz": [1], "dzbar": [1], "re": 1}]}]]}"#;
    let rejected = run_with_stdin(&["bounds", "chain", "--instance", "-"], matrix);
    assert_eq!(rejected.status.code(), Some(2));
}
