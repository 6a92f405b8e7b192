use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cfl_core::certificates::{example_nonsos_quartic, generate_cb_config};
use cfl_core::form::Form;
use serde_json::Value;

fn cfl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfl")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn without_wall_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wallTime");
    v
}

fn failing(v: &Value) -> Vec<String> {
    v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["pass"] == false)
        .map(|x| x["check"].as_str().unwrap().to_string())
        .collect()
}

fn write_form(dir: &Path, name: &str, form: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, form).unwrap();
    path.display().to_string()
}

const R4: &str = r#"{"n":2,"degree":4,"mode":"rational","terms":[{"exp":[4,0],"coeff":"1"},{"exp":[2,2],"coeff":"2"},{"exp":[0,4],"coeff":"1"}]}"#;
const X2Y2: &str = r#"{"n":2,"degree":4,"mode":"float","terms":[{"exp":[2,2],"coeff":1.0}]}"#;

#[test]
fn reproduce_table1_to_d6() {
    let out = cfl(&["reproduce-table1", "--max-d", "6", "--json-only"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let table = [1.000, 1.000, 1.000, 1.011, 1.000, 1.061];
    let rows = v["data"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for (row, t) in rows.iter().zip(table) {
        assert!((row["value"].as_f64().unwrap() - t).abs() <= 1e-3, "{row}");
    }
}

#[test]
fn cb_example_is_not_sos() {
    let out = cfl(&["cb-example", "--json-only"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["data"]["verdict"], "not sos");
    assert_eq!(v["data"]["condition"]["lhs"], 32.0);
    assert_eq!(failing(&v), ["first requirement"]);
}

#[test]
fn selftest_passes() {
    let out = cfl(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!(v["verdicts"].as_array().unwrap().len() > 40);
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 failed"));
}

#[test]
fn verify_identities_passes() {
    let out = cfl(&["verify-identities", "--json-only"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(failing(&json(&out)).is_empty());
}

#[test]
fn gcs_constant_b_is_catalan() {
    let out = cfl(&["gcs-constant", "--d", "5", "--which", "B", "--json-only"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["data"]["value"].as_f64().unwrap() - 14.0).abs() < 1e-6);
    assert_eq!(v["data"]["which"], "B");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["selftest", "--seed", "11", "--json-only"][..],
        &["reproduce-table1", "--max-d", "4", "--jobs", "2", "--json-only"],
        &["verify-identities", "--jobs", "3", "--json-only"],
    ] {
        let a = without_wall_time(json(&cfl(args)));
        let b = without_wall_time(json(&cfl(args)));
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap(), "{args:?}");
    }
    let a = json(&cfl(&["selftest", "--seed", "11", "--json-only"]));
    let b = json(&cfl(&["selftest", "--seed", "12", "--json-only"]));
    assert_ne!(a["inputsDigest"], b["inputsDigest"]);
}

#[test]
fn check_sos_writes_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let form = write_form(dir.path(), "r4.json", R4);
    let cert = dir.path().join("cert.json");
    let out = cfl(&["check-sos", &form, "--certificate-out", cert.to_str().unwrap(), "--json-only"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["data"]["verdict"], "certified");
    assert!(v["data"]["minEig"].as_f64().unwrap() > 0.0);
    let c: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c["basis"].as_array().unwrap().len(), 3);
}

#[test]
fn check_convex_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let r4 = write_form(dir.path(), "r4.json", R4);
    let x2y2 = write_form(dir.path(), "x2y2.json", X2Y2);
    assert_eq!(cfl(&["check-convex", &r4, "--json-only"]).status.code(), Some(0));
    let out = cfl(&["check-convex", &x2y2, "--grid", "2000", "--json-only"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["data"]["minEig"].as_f64().unwrap() < -0.5);
    // Sos but not convex.
    assert_eq!(cfl(&["check-sos", &x2y2, "--json-only"]).status.code(), Some(0));
}

#[test]
fn cb_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, generate_cb_config(3).unwrap().to_json_string()).unwrap();
    let r2 = Form::make(4, 2, (0..4).map(|i| {
        let mut e = vec![0; 4];
        e[i] = 2;
        (e, 1.0)
    }))
    .unwrap();
    let form = write_form(dir.path(), "p.json", &serde_json::to_string(&r2.pow(2).to_file()).unwrap());
    let out = cfl(&["cb-check", "--form", &form, "--config", cfg.to_str().unwrap(), "--json-only"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let ex = example_nonsos_quartic();
    let cfg = dir.path().join("ex.json");
    fs::write(&cfg, ex.config.to_json_string()).unwrap();
    let form = write_form(dir.path(), "ex_p.json", &serde_json::to_string(&ex.form.to_file()).unwrap());
    let out = cfl(&["cb-check", "--form", &form, "--config", cfg.to_str().unwrap(), "--json-only"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(failing(&json(&out)), ["first requirement"]);
}

#[test]
fn cb_check_negative_value_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, generate_cb_config(4).unwrap().to_json_string()).unwrap();
    let neg = r#"{"n":4,"degree":4,"mode":"float","terms":[{"exp":[4,0,0,0],"coeff":-1.0}]}"#;
    let form = write_form(dir.path(), "neg.json", neg);
    let out = cfl(&["cb-check", "--form", &form, "--config", cfg.to_str().unwrap(), "--json-only"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(failing(&json(&out))[0].starts_with("nonnegative at point"));
}

#[test]
fn levelset_csv() {
    let out = cfl(&["levelset-data", "--d", "2", "--samples", "8", "--json-only"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "theta,r,d");
    assert_eq!(lines.len(), 9);
    // θ = 0: r = 4^{−1/4}.
    let r: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((r - 4f64.powf(-0.25)).abs() < 1e-15);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.csv");
    let out = cfl(&["levelset-data", "--d", "4", "--out", path.to_str().unwrap(), "--json-only"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["data"]["samples"], 720);
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 721);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cfl(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cfl(&["--sdp-tol", "0.5", "selftest"]).status.code(), Some(2));
    assert_eq!(cfl(&["gcs-constant", "--d", "3", "--which", "A", "--tol", "1e-20"]).status.code(), Some(2));
    assert_eq!(cfl(&["check-sos", "/nonexistent/form.json"]).status.code(), Some(2));
    assert_eq!(cfl(&["reproduce-table1", "--max-d", "0"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write_form(dir.path(), "bad.json", r#"{"n":2,"degree":3,"mode":"float","terms":[{"exp":[2,2],"coeff":1.0}]}"#);
    let out = cfl(&["check-sos", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn odd_degree_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let odd = write_form(dir.path(), "odd.json", r#"{"n":2,"degree":3,"mode":"float","terms":[{"exp":[2,1],"coeff":1.0}]}"#);
    assert_eq!(cfl(&["check-sos", &odd]).status.code(), Some(2));
}
