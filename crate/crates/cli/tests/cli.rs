//! End-to-end tests of the nuspectra binary: exit codes, output formats,
//! and byte-identical reruns.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nuspectra"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const RM_CONFIG: &str = r#"{
  "mode": "real",
  "params": {"v1": 0, "v2": 0, "v3": 2, "v4": 0, "v5": 0, "v6": 0, "q": 1, "alpha": 1},
  "grid": {"half_width": 20.0, "points": 2001}
}"#;

fn run_ok(out: &Output) {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn spectrum_reflectionless_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", RM_CONFIG);
    let out_path = dir.path().join("spectrum.csv");
    let out = bin()
        .args(["spectrum", "--config", &cfg, "--out", out_path.to_str().unwrap()])
        .output()
        .unwrap();
    run_ok(&out);
    let csv = fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2, "{csv}");
    assert_eq!(lines[0], "n,eta,energy,admissible,flags");
    assert!(lines[1].starts_with("0,1,-1.0000000000000000e0,true"), "{}", lines[1]);
}

#[test]
fn spectrum_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", RM_CONFIG);
    let p1 = dir.path().join("a.csv");
    let p2 = dir.path().join("b.csv");
    for p in [&p1, &p2] {
        let out = bin()
            .args(["spectrum", "--config", &cfg, "--out", p.to_str().unwrap()])
            .output()
            .unwrap();
        run_ok(&out);
    }
    assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
}

#[test]
fn verify_reflectionless_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", RM_CONFIG);
    let out_path = dir.path().join("report.json");
    let out = bin()
        .args([
            "verify",
            "--config",
            &cfg,
            "--out",
            out_path.to_str().unwrap(),
            "--grid-points",
            "2001",
            "--half-width",
            "20",
        ])
        .output()
        .unwrap();
    run_ok(&out);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    let levels = report["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 1);
    let l = &levels[0];
    assert_eq!(l["e_closed"].as_f64().unwrap(), -1.0);
    assert!(l["abs_residual"].as_f64().unwrap() <= 1e-6);
    // The printed eta = -1 branch value (-4) is surfaced and flagged.
    let rejected = report["rejected"].as_array().unwrap();
    let spur = rejected
        .iter()
        .find(|r| r["eta"].as_i64() == Some(-1) && r["n"].as_u64() == Some(0))
        .expect("eta=-1 candidate in report");
    assert_eq!(spur["e_closed"].as_f64().unwrap(), -4.0);
    assert_eq!(spur["admissible"].as_bool(), Some(false));
    assert!(!spur["flags"].as_array().unwrap().is_empty());
}

#[test]
fn verify_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", RM_CONFIG);
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    for p in [&p1, &p2] {
        let out = bin()
            .args([
                "verify", "--config", &cfg, "--out", p.to_str().unwrap(),
                "--grid-points", "1601", "--half-width", "18",
            ])
            .output()
            .unwrap();
        run_ok(&out);
    }
    assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
}

#[test]
fn wavefunction_two_column_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", RM_CONFIG);
    let out_path = dir.path().join("psi.dat");
    let out = bin()
        .args([
            "wavefunction",
            "--config",
            &cfg,
            "--level",
            "0",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    run_ok(&out);
    let text = fs::read_to_string(&out_path).unwrap();
    let mut norm = 0.0;
    let mut count = 0;
    let mut prev_x = f64::NEG_INFINITY;
    for line in text.lines() {
        let cols: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cols.len(), 2);
        let x: f64 = cols[0].parse().unwrap();
        let v: f64 = cols[1].parse().unwrap();
        assert!(x > prev_x);
        prev_x = x;
        norm += v * v;
        count += 1;
    }
    assert_eq!(count, 2001);
    let h = 40.0 / 2000.0;
    assert!((norm * h - 1.0).abs() < 1e-3, "norm {}", norm * h);
}

#[test]
fn wavefunction_missing_level_is_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", RM_CONFIG);
    let out = bin()
        .args([
            "wavefunction", "--config", &cfg, "--level", "5",
            "--out", dir.path().join("psi.dat").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("LevelNotFound"), "{err}");
}

#[test]
fn config_error_exits_two_with_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{"mode":"real","params":{"v1":0,"v2":0,"v3":2,"v4":0,"v5":0,"v6":0,"q":0,"alpha":1}}"#,
    );
    let out = bin()
        .args(["spectrum", "--config", &cfg, "--out", dir.path().join("x.csv").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("InvalidConfig") && err.contains("q must be nonzero"), "{err}");
}

#[test]
fn unknown_config_key_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{"mode":"real","params":{"v1":0,"v2":0,"v3":2,"v4":0,"v5":0,"v6":0,"q":1,"alpha":1},"extra":true}"#,
    );
    let out = bin()
        .args(["spectrum", "--config", &cfg, "--out", dir.path().join("x.csv").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn nu_solve_prints_branches_and_lambdas() {
    let out = bin()
        .args([
            "nu-solve",
            "--sigma", "0,1,-1",
            "--sigma-tilde", "-1,2,-1",
            "--tau-tilde", "1,-1",
            "--n", "0..2",
        ])
        .output()
        .unwrap();
    run_ok(&out);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("branches: 4"), "{text}");
    assert!(text.contains("lambda_0"), "{text}");
    assert!(text.contains("lambda_2"), "{text}");
    assert!(text.contains("weight exponents"), "{text}");
}

#[test]
fn pt_scan_sweeps_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "pt.json",
        r#"{
          "mode": "pt",
          "params": {"v1": 0.5, "v2": 0, "v3": 0, "v4": 0, "v5": 0, "v6": 0, "q": 1, "alpha": 1},
          "n_max_hint": 2
        }"#,
    );
    let out_path = dir.path().join("scan.csv");
    let out = bin()
        .args([
            "pt-scan",
            "--config",
            &cfg,
            "--sweep",
            "V1=0.2:1.0:0.2",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    run_ok(&out);
    let csv = fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "value,levels,max_abs_im_e,pt_symmetric");
    assert_eq!(lines.len(), 6, "{csv}");
    // PT mode with real parameters stays PT-symmetric along the sweep.
    for line in &lines[1..] {
        assert!(line.ends_with("true"), "{line}");
    }
}

#[test]
fn pt_scan_ordering_is_deterministic_under_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "pt.json",
        r#"{
          "mode": "pt",
          "params": {"v1": 0.5, "v2": 0, "v3": 0, "v4": 0, "v5": 0, "v6": 0, "q": 1, "alpha": 1}
        }"#,
    );
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let p = dir.path().join(format!("scan{threads}.csv"));
        let out = bin()
            .env("NUSPECTRA_THREADS", threads)
            .args([
                "pt-scan", "--config", &cfg,
                "--sweep", "V1=0:1:0.1",
                "--out", p.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        run_ok(&out);
        outputs.push(fs::read(&p).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn oracle_subcommand_writes_levels() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", RM_CONFIG);
    let out_path = dir.path().join("oracle.csv");
    let out = bin()
        .args([
            "oracle", "--config", &cfg, "--out", out_path.to_str().unwrap(),
            "--grid-points", "2001", "--half-width", "20",
        ])
        .output()
        .unwrap();
    run_ok(&out);
    let csv = fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "level,e_fd,e_numerov");
    assert_eq!(lines.len(), 2);
    let cols: Vec<&str> = lines[1].split(',').collect();
    let e_fd: f64 = cols[1].parse().unwrap();
    let e_nv: f64 = cols[2].parse().unwrap();
    assert!((e_fd + 1.0).abs() < 1e-6 && (e_fd - e_nv).abs() < 1e-7, "{}", lines[1]);
}

#[test]
fn complex_spectrum_has_imaginary_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "npt.json",
        r#"{
          "mode": "nonpt",
          "params": {"v1": 0, "v2": 1, "v3": 0, "v4": 0, "v5": 0, "v6": 0, "q": 1, "alpha": 1},
          "n_max_hint": 1,
          "eta_policy": "-1"
        }"#,
    );
    let out_path = dir.path().join("spec.csv");
    let out = bin()
        .args(["spectrum", "--config", &cfg, "--out", out_path.to_str().unwrap()])
        .output()
        .unwrap();
    run_ok(&out);
    let csv = fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,eta,e_re,e_im,real,flags");
    // n = 0 row: E = 2 alpha^2 (radicand 1 + 1 = 2), real.
    let cols: Vec<&str> = lines[1].split(',').collect();
    assert_eq!((cols[0], cols[1], cols[4]), ("0", "-1", "true"));
    let e_re: f64 = cols[2].parse().unwrap();
    let e_im: f64 = cols[3].parse().unwrap();
    assert!((e_re - 2.0).abs() < 1e-12 && e_im == 0.0, "{}", lines[1]);
}
