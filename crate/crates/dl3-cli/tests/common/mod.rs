//! Shared golden-check helpers for the CLI test targets: each function
//! panics on mismatch and is reused by both the golden tests and the
//! acceptance suite.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dl3"))
}

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden(name: &str) -> String {
    fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap_or_else(|e| panic!("missing golden {name}: {e}"))
}

pub fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dl3-cli-{}-{tag}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

pub fn expect_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

/// frenet on the helix spec: byte-identical CSV, exit 0, constant κ = 2/3
/// and τ = 1/3 within 1e-9, all dual columns zero.
pub fn check_frenet_golden(tag: &str) {
    let dir = tmp_dir(&format!("frenet-{tag}"));
    let out_path = dir.join("helix.csv");
    let out = bin()
        .args(["frenet", "--spec"])
        .arg(fixtures().join("helix.json"))
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    expect_exit(&out, 0);
    let produced = fs::read_to_string(&out_path).unwrap();
    assert_eq!(
        produced,
        golden("frenet_helix.csv"),
        "frenet output drifted"
    );

    let mut lines = produced.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let kappa_idx = header.iter().position(|&h| h == "kappa_re").unwrap();
    let tau_idx = header.iter().position(|&h| h == "tau_re").unwrap();
    let du_idx: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| h.ends_with("_du"))
        .map(|(i, _)| i)
        .collect();
    let mut rows = 0;
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((f[kappa_idx] - 2.0 / 3.0).abs() < 1e-9);
        assert!((f[tau_idx] - 1.0 / 3.0).abs() < 1e-9);
        for &i in &du_idx {
            assert_eq!(f[i], 0.0);
        }
        rows += 1;
    }
    assert_eq!(rows, 256);
}

/// partner + verify + theorems: byte-identical tables, manifest and reports.
pub fn check_pair_golden(tag: &str) {
    let dir = tmp_dir(&format!("pair-{tag}"));
    let out = bin()
        .args(["partner", "--spec"])
        .arg(fixtures().join("partner.json"))
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    expect_exit(&out, 0);
    for name in ["alpha.csv", "beta.csv", "pair.json"] {
        let produced = fs::read_to_string(dir.join(name)).unwrap();
        assert_eq!(produced, golden(name), "{name} drifted");
    }

    let report = dir.join("report.json");
    let out = bin()
        .arg("verify")
        .arg(&dir)
        .args(["--tol", "1e-6", "--report"])
        .arg(&report)
        .output()
        .unwrap();
    expect_exit(&out, 0);
    assert_eq!(fs::read_to_string(&report).unwrap(), golden("report.json"));

    let theorems = dir.join("theorems.json");
    let out = bin()
        .arg("theorems")
        .arg(&dir)
        .arg("--report")
        .arg(&theorems)
        .output()
        .unwrap();
    expect_exit(&out, 0);
    assert_eq!(
        fs::read_to_string(&theorems).unwrap(),
        golden("theorems.json")
    );
}

/// Exit code 2 for malformed/invalid inputs, with machine-readable stderr.
pub fn check_error_exit_codes() {
    let out = bin()
        .args(["frenet", "--spec"])
        .arg(fixtures().join("malformed.json"))
        .args(["--out", "/dev/null"])
        .output()
        .unwrap();
    expect_exit(&out, 2);
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("machine-readable stderr");
    assert_eq!(err["error"]["stage"], "parse");
    assert!(!out.stdout.is_empty(), "human-readable summary on stdout");

    for (fixture, needle) in [
        ("zero_lambda.json", "nonzero constant"),
        ("constant_q.json", "degenerate pair"),
    ] {
        let out = bin()
            .args(["partner", "--spec"])
            .arg(fixtures().join(fixture))
            .args(["--out", "/tmp/dl3-invalid-out"])
            .output()
            .unwrap();
        expect_exit(&out, 2);
        let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
        let msg = err["error"]["message"].as_str().unwrap();
        assert!(msg.contains(needle), "message `{msg}` lacks `{needle}`");
    }
}

/// Exit code 3 when verification fails; the failing report is still written.
pub fn check_verify_failure(tag: &str) {
    let dir = tmp_dir(&format!("sham-{tag}"));
    let out = bin()
        .args(["partner", "--spec"])
        .arg(fixtures().join("partner.json"))
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    expect_exit(&out, 0);
    fs::copy(dir.join("beta.csv"), dir.join("alpha.csv")).unwrap();
    let out = bin()
        .arg("verify")
        .arg(&dir)
        .args(["--tol", "1e-6"])
        .output()
        .unwrap();
    expect_exit(&out, 3);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["verdicts"]["is_pair"], false);
}
