//! End-to-end runs of the `qgeom` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qgeom::app::parse_json;

fn qgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgeom")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn validate_config_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_config(dir.path(), "ssh.json", r#"{"model":"ssh","delta_t":0.2,"temperature":0.5}"#);
    let gapless = write_config(dir.path(), "gapless.json", r#"{"model":"ssh","delta_t":0.0}"#);
    let garbage = write_config(dir.path(), "bad.json", "{ not json");
    assert_eq!(code(&qgeom(&["validate-config", "--model-config", good.to_str().unwrap()])), 0);
    let o = qgeom(&["validate-config", "--model-config", gapless.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("delta_t"));
    assert_eq!(code(&qgeom(&["validate-config", "--model-config", garbage.to_str().unwrap()])), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&qgeom(&["validate-config", "--model-config", missing.to_str().unwrap()])), 2);
}

#[test]
fn csv_scans_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "dirac.json", r#"{"model":"dirac2d","mass":1.0}"#);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = qgeom(&[
            "scan",
            "--model-config",
            cfg.to_str().unwrap(),
            "--grid",
            "-1:1:5",
            "--grid",
            "-1:1:4",
            "--quantity",
            "qfim,berry,christoffel",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next().unwrap(), "kx,ky,quantity,method,value,error");
    assert!(text.lines().skip(1).all(|l| l.split(',').count() == 6));
}

#[test]
fn json_scan_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "spin.json", r#"{"model":"spin"}"#);
    let o = qgeom(&[
        "scan",
        "--model-config",
        cfg.to_str().unwrap(),
        "--grid",
        "-1:1:3",
        "--quantity",
        "qfim",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let result = parse_json(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    let row = result.lookup(&[0.0], "qfim_0_0", "genfun").unwrap();
    assert!((row.value.unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn failed_points_give_partial_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    // d = (x, 0, 0) closes the gap at x = 0
    let cfg = write_config(
        dir.path(),
        "custom.json",
        r#"{"model":"custom","param_dim":1,"target":"dvec","temperature":0.5,
            "components":[[{"coeff":1.0,"factors":[{"atom":"poly","var":0,"power":1}]}],[],[]]}"#,
    );
    let o = qgeom(&["scan", "--model-config", cfg.to_str().unwrap(), "--grid", "-1:1:3", "--quantity", "qfim"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.contains("NaN") && l.contains("GAP_CLOSURE")));
}

#[test]
fn compare_passes_on_a_gapped_chain_and_bad_grids_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ssh.json", r#"{"model":"ssh","delta_t":0.2}"#);
    let path = cfg.to_str().unwrap();
    let o = qgeom(&["compare", "--model-config", path, "--grid", "-3:3:7", "--quantity", "qfim,metric"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ok"));
    assert_eq!(code(&qgeom(&["compare", "--model-config", path, "--grid", "1:-1:5"])), 2);
    assert_eq!(code(&qgeom(&["compare", "--model-config", path, "--grid", "-1:1:5", "--grid", "-1:1:5"])), 2);
    assert_eq!(code(&qgeom(&["scan", "--model-config", path, "--grid", "-1:1:5", "--quantity", "bogus"])), 2);
}

#[test]
fn point_reports_every_route() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "dirac.json", r#"{"model":"dirac2d","mass":-1.0}"#);
    let o = qgeom(&["point", "--model-config", cfg.to_str().unwrap(), "--at", "-0.5,0.25"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let routes: Vec<&str> = doc["reports"].as_array().unwrap().iter().map(|r| r["route"].as_str().unwrap()).collect();
    assert!(routes.contains(&"genfun") && routes.contains(&"closed_form"), "{routes:?}");
}
