//! The binary: exit codes, output headers and byte-for-byte reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spectral-curve"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_to(args: &[&str], out: &Path) -> (i32, Vec<u8>) {
    let o = bin().args(args).arg("--out").arg(out).output().unwrap();
    (o.status.code().unwrap(), std::fs::read(out).unwrap_or_default())
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = run(&["density", "--a", "10", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Usage"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_subcommand_and_bad_values_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["mc", "--n", "401"]).status.code(), Some(2));
    assert_eq!(run(&["quartic-solve", "--a", "0"]).status.code(), Some(2));
    assert_eq!(run(&["quartic-solve", "--a", "ten"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn bad_thread_override_is_a_usage_error() {
    let o = bin().env("SPECTRAL_CURVE_THREADS", "many").args(["gaussian-curve", "--a", "2"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn quartic_solve_json() {
    let o = run(&["quartic-solve", "--a", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["alpha"].as_f64().unwrap() + 95.36).abs() < 0.01);
    assert!((v["beta"].as_f64().unwrap() - 21.2).abs() < 0.05);
    assert_eq!(v["pass"], true);
    assert_eq!(v["header"]["flags"]["a"], 10.0);
    assert_eq!(v["header"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn density_csv_rows_and_masses() {
    let dir = tempfile::tempdir().unwrap();
    let (code, bytes) = run_to(&["density", "--a", "10", "--grid", "400"], &dir.path().join("rho.csv"));
    assert_eq!(code, 0);
    let text = String::from_utf8(bytes).unwrap();
    let comments: Vec<&str> = text.lines().filter(|l| l.starts_with('#')).collect();
    assert!(comments[0].starts_with("# spectral-curve "));
    assert!(comments.iter().any(|l| l.contains("--grid 400")));
    assert!(comments.iter().any(|l| l.starts_with("# seed:")));
    let masses: Vec<f64> =
        comments.iter().filter(|l| l.starts_with("# I")).filter_map(|l| l.split(" mass ").nth(1)).map(|m| m.parse().unwrap()).collect();
    assert_eq!(masses.len(), 2);
    assert!(masses.iter().all(|m| (m - 0.5).abs() < 1e-6));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "x,rho");
    assert_eq!(rows.len(), 801);
    // 17 significant digits in every field
    for f in rows[1].split(',') {
        let mantissa = f.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17, "{f}");
    }
}

#[test]
fn verify_exit_code_follows_report() {
    let dir = tempfile::tempdir().unwrap();
    for (a, want) in [("10", 0), ("0.1", 1)] {
        let (code, bytes) = run_to(&["verify", "--a", a], &dir.path().join(format!("v{a}.json")));
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(code, want);
        assert_eq!(v["pass"].as_bool().unwrap(), want == 0);
        for key in ["a", "alpha", "beta", "gamma1", "gamma2", "checks", "pass"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        for c in v["checks"].as_array().unwrap() {
            for key in ["name", "worst", "at", "pass"] {
                assert!(c.get(key).is_some(), "{key}");
            }
        }
    }
}

#[test]
fn gaussian_verify_passes() {
    let o = run(&["verify", "--a", "2", "--x2", "0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn mc_outputs_are_thread_count_independent() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["mc", "--a", "2", "--n", "40", "--samples", "12", "--seed", "5", "--format", "csv"];
    let mut outs = Vec::new();
    for threads in ["1", "2", "4"] {
        let path = dir.path().join(format!("t{threads}.csv"));
        let o = bin().env("SPECTRAL_CURVE_THREADS", threads).args(args).arg("--out").arg(&path).output().unwrap();
        assert_eq!(o.status.code(), Some(0));
        outs.push(std::fs::read(&path).unwrap());
    }
    assert!(outs.windows(2).all(|w| w[0] == w[1]));
    let text = String::from_utf8(outs.pop().unwrap()).unwrap();
    assert!(text.contains("# seed: 5"));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1 + 40 * 12);
}

#[test]
fn mc_json_record() {
    let o = run(&["mc", "--n", "40", "--samples", "4", "--seed", "1", "--bins", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["cdf_sup_distance", "per_bin_max", "n", "samples", "seed", "a"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["a"], 2.0);
    assert_eq!(v["header"]["seed"], 1);
}

#[test]
fn report_bundles_everything() {
    let o = run(&["report", "--a", "10", "--grid", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["report"]["pass"], true);
    assert_eq!(v["density"]["masses"].as_array().unwrap().len(), 2);
}

#[test]
fn curve_outputs() {
    let o = run(&["gaussian-curve", "--a", "2", "--x2", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["c2", "c1", "c0", "a", "field"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let o = run(&["quartic-solve", "--a", "10", "--format", "csv", "--grid", "50"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("z_re,z_im,r1_re,r1_im,r2_re,r2_im,r3_re,r3_im"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 51);
}
