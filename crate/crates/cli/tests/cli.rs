//! End-to-end runs of the `amgm` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn amgm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amgm")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn close(v: &Value, x: f64) -> bool {
    (v.as_f64().unwrap() - x).abs() <= 1e-12 * x.abs().max(1.0)
}

#[test]
fn eval_bare_array() {
    let out = amgm(&["eval", "[1, 9]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(close(&v["gap"], 2.0) && close(&v["upper"], 2.0) && close(&v["lower"], 2.0));
    assert_eq!(v["equality_case"], true);
}

#[test]
fn eval_distribution_with_zero_atom() {
    let out = amgm(&["eval", r#"{"atoms":[{"x":0,"p":0.25},{"x":5.333333333333333,"p":0.75}]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(close(&v["gap"], 4.0) && close(&v["upper"], 4.0));
    assert_eq!(v["log_mean"], "-inf");
}

#[test]
fn eval_from_file_matches_inline() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    std::fs::write(&path, r#"{"atoms":[{"x":9,"p":0.5},{"x":1,"p":0.5}]}"#).unwrap();
    let a = json(&amgm(&["eval", path.to_str().unwrap()]));
    let b = json(&amgm(&["eval", "[1, 9]"]));
    assert_eq!(a, b);
}

#[test]
fn eval_errors_exit_2() {
    let out = amgm(&["eval", "[]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty support"));
    assert_eq!(amgm(&["eval", "{\"atoms\": [}"]).status.code(), Some(2));
    assert_eq!(amgm(&["eval", "/no/such/file.json"]).status.code(), Some(2));
    let out = amgm(&["eval", r#"{"atoms":[{"x":1,"p":0.5},{"x":-1,"p":0.5}]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("atom 1"));
}

#[test]
fn extremal_specs() {
    let v = json(&amgm(&["extremal", "--side", "hi", "--v", "1", "--e", "4"]));
    assert!(close(&v["spec"]["u"], 0.0));
    assert!(close(&v["spec"]["v"], 4.0 / 3f64.sqrt()));
    assert!(close(&v["spec"]["p"], 0.25));
    assert!(close(&v["summary"]["V"], 1.0) && close(&v["summary"]["E"], 4.0));
    assert!(close(&v["psi"], 4.0) && close(&v["bound"], 4.0));

    let v = json(&amgm(&["extremal", "--side", "lo", "--v", "1", "--f", "2"]));
    assert!(close(&v["spec"]["v"], 2.0) && close(&v["spec"]["p"], 0.5));

    let v = json(&amgm(&["extremal", "--side", "hi", "--v", "1", "--e", "4", "--u", "1", "--c", "-1"]));
    assert_eq!(v["distribution"]["atoms"][0]["x"], 0.0);

    let out = amgm(&["extremal", "--side", "lo", "--v", "1", "--f", "inf"]);
    assert_eq!(out.status.code(), Some(2));
    let out = amgm(&["extremal", "--side", "hi", "--v", "1", "--e", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E > V > 0"));
    let out = amgm(&["extremal", "--side", "hi", "--v", "1", "--e", "4", "--c", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let out = amgm(&["verify", "sandwich", "--trials", "20000", "--seed", "1", "--ci"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["failures"], 0);
    assert_eq!(v["suites"][0]["witness"], Value::Null);

    let v = json(&amgm(&["verify", "attain", "--side", "hi", "--v", "1", "--e", "1.5", "--grid", "1000"]));
    assert!((v["suites"][0]["extremum"].as_f64().unwrap() - 2.0).abs() <= 2e-6);

    let v = json(&amgm(&["verify", "prop2", "--v", "1", "--f", "INF"]));
    let rows = v["suites"][0]["mixture"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for (row, eps) in rows.iter().zip([0.1, 0.01, 0.001]) {
        assert!((row["spread_low"].as_f64().unwrap() - (1.0 + eps)).abs() <= 1e-6 * (1.0 + eps));
    }

    let out = amgm(&["verify", "all", "--trials", "500", "--seed", "3", "--sequential"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["suites"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_is_reproducible() {
    let strip = |mut v: Value| {
        for s in v["suites"].as_array_mut().unwrap() {
            s.as_object_mut().unwrap().remove("elapsed_ms");
        }
        v
    };
    let args = ["verify", "lemvar", "--trials", "5000", "--seed", "17", "--ci"];
    let a = strip(json(&amgm(&args)));
    let b = strip(json(&amgm(&[&args[..], &["--sequential"]].concat())));
    assert_eq!(a, b);
}

#[test]
fn verify_flag_errors_exit_2() {
    assert_eq!(amgm(&["verify", "sandwich", "--ci"]).status.code(), Some(2));
    assert_eq!(amgm(&["verify", "sandwich", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(amgm(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(amgm(&["verify", "attain", "--grid", "10"]).status.code(), Some(2));
    assert_eq!(amgm(&["verify", "attain", "--side", "lo", "--f", "inf"]).status.code(), Some(2));
}

fn sweep(args: &[&str]) -> (Output, Vec<Vec<String>>) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = amgm(&[&["sweep"], args, &["--output", path.to_str().unwrap()]].concat());
    let rows = if out.status.success() {
        csv::Reader::from_path(&path)
            .unwrap()
            .records()
            .map(|r| r.unwrap().iter().map(String::from).collect())
            .collect()
    } else {
        Vec::new()
    };
    (out, rows)
}

#[test]
fn sweep_upper() {
    let (out, rows) = sweep(&["--side", "hi", "--v", "1", "--values", "1.5,2,3,4"]);
    assert_eq!(out.status.code(), Some(0));
    let bounds: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(bounds, [2.0, 2.0, 3.0, 4.0]);
}

#[test]
fn sweep_lower_with_infinity() {
    let (out, rows) = sweep(&["--side", "lo", "--v", "1", "--values", "1.25,2,4,INF"]);
    assert_eq!(out.status.code(), Some(0));
    let bounds: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    let expected = [2.0, 2.0, 4.0 / 3.0, 1.0];
    for (b, e) in bounds.iter().zip(expected) {
        assert!((b - e).abs() <= 1e-15, "{bounds:?}");
    }
    assert_eq!(rows[3][1], "inf");
}

#[test]
fn sweep_marks_inadmissible_rows() {
    let (out, rows) = sweep(&["--side", "hi", "--v", "0,1", "--values", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(rows[0][3], "true");
    assert_eq!(rows[0][2], "");
    assert_eq!(rows[1][3], "false");
}

#[test]
fn sweep_unwritable_path_exits_2() {
    let out = amgm(&["sweep", "--side", "hi", "--v", "1", "--values", "2", "--output", "/no/such/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
}
