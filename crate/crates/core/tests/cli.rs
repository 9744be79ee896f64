use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ce_qec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ce-qec"))
        .args(args)
        .env("CE_QEC_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn build(dir: &Path, outer: &str, inner: &str) -> String {
    let path = dir.join(format!("{outer}_{inner}.json"));
    let p = path.to_str().unwrap().to_string();
    let o = ce_qec(&["build", "--outer", outer, "--inner", inner, "--out", &p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

#[test]
fn build_then_verify_eight_qubit() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "LNCY4", "KLM");
    let doc: Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(doc["r_vector"], "0001111");
    assert_eq!(doc["rotation"], "IXIXIXIX");
    let o = ce_qec(&["verify", &p]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["passed"], true);
    assert_eq!(r["constant_excitation"]["constant"], true);
}

#[test]
fn rep2_is_not_constant_excitation() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "LNCY4", "REP2");
    let r = json(&ce_qec(&["verify", &p]));
    assert_eq!(r["constant_excitation"]["constant"], false);
}

#[test]
fn steane_klm_corrects_weight_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "STEANE7", "KLM");
    let o = ce_qec(&["verify", &p]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["decoder"]["required"], true);
    assert_eq!(r["decoder"]["corrected"], 42);
}

#[test]
fn outer_code_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let outer = dir.path().join("outer.json");
    let code = ce_qec::stabilizer::StabilizerCode::builtin("LNCY4").unwrap();
    fs::write(&outer, code.to_json().unwrap()).unwrap();
    let p = build(dir.path(), outer.to_str().unwrap(), "KLM");
    assert_eq!(ce_qec(&["verify", &p]).status.code(), Some(0));
}

#[test]
fn tampered_file_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "LNCY4", "KLM");
    let text = fs::read_to_string(&p).unwrap();
    let tampered = text.replacen("0001111", "1001111", 1);
    assert_ne!(text, tampered);
    fs::write(&p, tampered).unwrap();
    let o = ce_qec(&["verify", &p]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["passed"], false);
}

#[test]
fn corrupted_json_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "LNCY4", "KLM");
    let text = fs::read_to_string(&p).unwrap();
    fs::write(&p, &text[..text.len() / 2]).unwrap();
    assert_eq!(ce_qec(&["verify", &p]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(ce_qec(&["verify", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(ce_qec(&["build", "--outer", "LNCY4", "--inner", "REP3"]).status.code(), Some(2));
    assert_eq!(ce_qec(&["memory-curve", "--delta", "-0.1"]).status.code(), Some(2));
    assert_eq!(ce_qec(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ce_qec(&["--help"]).status.code(), Some(0));
}

#[test]
fn klcheck_reports_gram_tensor() {
    let o = ce_qec(&["klcheck", "--gamma", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["passed"], true);
    let g = r["dagger"]["g"].as_array().unwrap();
    assert_eq!(g.len(), 9);
    assert!((g[0].as_f64().unwrap() - 0.9f64.powi(4)).abs() < 1e-12);
    assert!((g[1].as_f64().unwrap() - 0.1 * 0.9f64.powi(3) / 2.0).abs() < 1e-12);
}

#[test]
fn memory_curve_csv() {
    let o = ce_qec(&["memory-curve", "--delta", "1e-4", "--tmax", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "T,eps_base,eps,bound");
    assert_eq!(lines.len(), 12);
    assert!(lines[1].starts_with("0,"));
}

#[test]
fn overhead_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    let o = ce_qec(&["overhead", "--points", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert_eq!(text.lines().next().unwrap(), ce_qec::analytics::OVERHEAD_CSV_HEADER);
}

#[test]
fn simulate_is_deterministic() {
    let args = ["simulate", "--delta", "0.01", "--steps", "20", "--trajectories", "500", "--seed", "7"];
    let a = ce_qec(&args);
    assert_eq!(a.status.code(), Some(0));
    let b = Command::new(env!("CARGO_BIN_EXE_ce-qec"))
        .args(args)
        .env("CE_QEC_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["trajectories"], 500);
    assert_eq!(r["seed"], 7);
    let c = ce_qec(&["simulate", "--delta", "0.01", "--steps", "20", "--trajectories", "500", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}
