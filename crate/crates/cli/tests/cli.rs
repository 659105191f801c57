//! End-to-end checks of the command-line interface: schemas, determinism,
//! exit codes, and the spec-file round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semicycle"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

#[test]
fn lambda_at_two_prints_two_in_both_columns() {
    let text = stdout(&["lambda", "--tau", "2"]);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "tau,lambda,lambda_closed_form");
    assert_eq!(lines.next().unwrap(), "2,2,2");
}

#[test]
fn lambda_at_nine_eighths_matches_the_closed_form() {
    let text = stdout(&["lambda", "--tau", "1.125"]);
    let row = text.lines().nth(1).unwrap();
    let cells: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
    let expect = 13.0 / 8.0 + 2.0_f64.ln();
    assert!((cells[1] - expect).abs() < 1e-8, "numeric {}", cells[1]);
    assert!((cells[2] - expect).abs() < 1e-12, "closed form {}", cells[2]);
}

#[test]
fn rho_is_one_at_three_halves() {
    let text = stdout(&["rho", "--tau", "1.5"]);
    assert_eq!(text.lines().nth(1).unwrap(), "1.5,1");
}

#[test]
fn identical_config_gives_byte_identical_output() {
    let a = stdout(&["converge", "--tau", "1.2", "--seed", "5", "--periods", "30"]);
    let b = stdout(&["converge", "--tau", "1.2", "--seed", "5", "--periods", "30"]);
    assert_eq!(a, b);
    let c = stdout(&["rho", "--tau-grid", "0.5:1.5:7"]);
    let d = stdout(&["rho", "--tau-grid", "0.5:1.5:7"]);
    assert_eq!(c, d);
}

#[test]
fn json_format_parses_and_matches_csv() {
    let json = stdout(&["lambda", "--tau-grid", "1:2:3", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&json).expect("valid json");
    let arr = rows.as_array().unwrap();
    assert_eq!(arr.len(), 3);
    assert!((arr[2]["lambda"].as_f64().unwrap() - 2.0).abs() < 1e-9);

    let csv = stdout(&["lambda", "--tau-grid", "1:2:3"]);
    let second = csv.lines().nth(2).unwrap();
    let lam_csv: f64 = second.split(',').nth(1).unwrap().parse().unwrap();
    assert!((arr[1]["lambda"].as_f64().unwrap() - lam_csv).abs() == 0.0);
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["lambda"]); // neither --tau nor --tau-grid
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["lambda", "--tau", "0.2"]); // below the threshold
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["decay-bound", "--tau", "0.9", "--delta", "0.7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spec_file_round_trip_through_simulate() {
    let dir = std::env::temp_dir().join(format!("semicycle-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec_path: PathBuf = dir.join("minus.json");
    let out = run(&[
        "periodic",
        "--kind",
        "minus",
        "--emit-spec",
        spec_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&[
        "simulate",
        "--spec",
        spec_path.to_str().unwrap(),
        "--horizon",
        "5",
        "--step",
        "0.25",
    ]);
    // The sawtooth profile: value 0.5 at t = 0.5, -1 at t = 2.5.
    let mut at_half = None;
    let mut at_two_half = None;
    for line in text.lines().skip(1) {
        let mut cells = line.split(',');
        let t: f64 = cells.next().unwrap().parse().unwrap();
        let v: f64 = cells.next().unwrap().parse().unwrap();
        if (t - 0.5).abs() < 1e-12 {
            at_half = Some(v);
        }
        if (t - 2.5).abs() < 1e-12 {
            at_two_half = Some(v);
        }
    }
    assert!((at_half.unwrap() - 0.5).abs() < 1e-12);
    assert!((at_two_half.unwrap() + 1.0).abs() < 1e-12);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_dir_env_is_honoured() {
    let dir = std::env::temp_dir().join(format!("semicycle-outdir-{}", std::process::id()));
    let out = bin()
        .args(["rho", "--tau", "1.5"])
        .env("SEMICYCLE_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let written = std::fs::read_to_string(dir.join("rho.csv")).expect("file written");
    assert!(written.contains("1.5,1"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn conjecture_probe_is_exploratory_and_reproduces_the_profile() {
    let json = stdout(&[
        "conjecture",
        "--history",
        "exact",
        "--periods",
        "12",
        "--format",
        "json",
    ]);
    let rep: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(rep["exploratory"], serde_json::Value::Bool(true));
    assert!((rep["amplitude"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    for w in rep["residual_by_window"].as_array().unwrap() {
        assert!(w.as_f64().unwrap() <= 1e-9);
    }
}

#[test]
fn normalize_reports_the_clock() {
    let json = stdout(&[
        "normalize",
        "--preset",
        "minus",
        "--horizon",
        "5",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(v["normalized"]["p"].is_object());
    assert!(v["clock"]["segments"].is_array());
}

#[test]
fn semicycles_of_the_sawtooth() {
    let text = stdout(&["semicycles", "--preset", "minus", "--horizon", "10"]);
    let alpha_line = text.lines().find(|l| l.starts_with("# alpha")).unwrap();
    let alpha: f64 = alpha_line.split(',').nth(1).unwrap().parse().unwrap();
    assert!((alpha - 2.5).abs() < 1e-7, "alpha = {alpha}");
}
