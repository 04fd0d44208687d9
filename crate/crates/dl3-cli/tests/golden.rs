//! Golden tests for the CLI: byte-identical outputs against committed files,
//! plus the exit-code contract (0 success, 2 validation/compute error,
//! 3 verification failure).

mod common;

use common::*;
use std::fs;

#[test]
fn frenet_matches_golden_and_constants() {
    check_frenet_golden("golden");
}

#[test]
fn partner_verify_theorems_match_golden() {
    check_pair_golden("golden");
}

#[test]
fn error_paths_exit_two() {
    check_error_exit_codes();
}

#[test]
fn verify_failure_exits_three() {
    check_verify_failure("golden");
}

#[test]
fn theorems_report_carries_variants_and_splits() {
    let produced: serde_json::Value = serde_json::from_str(&golden("theorems.json")).unwrap();
    let names: Vec<&str> = produced["identities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["name"].as_str().unwrap())
        .collect();
    for want in [
        "angle_cosh_sq_plus",
        "angle_cosh_sq_minus",
        "angle_sinh_sq_plus",
        "angle_sinh_sq_minus",
        "normal_coeff_sum_coth",
        "normal_coeff_sum_tanh",
        "center_ratio_product_form",
        "center_ratio_root_form",
    ] {
        assert!(names.contains(&want), "{want} missing from report");
    }
    assert!(produced["splits"].is_object());
    // The verify-level report omits splits.
    let verify: serde_json::Value = serde_json::from_str(&golden("report.json")).unwrap();
    assert!(verify.get("splits").is_none());
}

#[test]
fn thread_cap_does_not_change_bytes() {
    let dir = tmp_dir("threads");
    let out_path = dir.join("helix.csv");
    let out = bin()
        .env("DL3_THREADS", "1")
        .args(["frenet", "--spec"])
        .arg(fixtures().join("helix.json"))
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    expect_exit(&out, 0);
    assert_eq!(
        fs::read_to_string(&out_path).unwrap(),
        golden("frenet_helix.csv")
    );

    let out = bin()
        .env("DL3_THREADS", "not-a-number")
        .args(["frenet", "--spec"])
        .arg(fixtures().join("helix.json"))
        .args(["--out", "/dev/null"])
        .output()
        .unwrap();
    expect_exit(&out, 2);
}

#[test]
fn mismatched_pair_grids_are_rejected() {
    let dir = tmp_dir("mismatch");
    let out = bin()
        .args(["partner", "--spec"])
        .arg(fixtures().join("partner.json"))
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    expect_exit(&out, 0);
    // Truncate alpha.csv so the correspondence no longer matches row-for-row.
    let alpha = fs::read_to_string(dir.join("alpha.csv")).unwrap();
    let truncated: Vec<&str> = alpha.lines().take(40).collect();
    fs::write(dir.join("alpha.csv"), truncated.join("\n") + "\n").unwrap();
    let out = bin().arg("verify").arg(&dir).output().unwrap();
    expect_exit(&out, 2);
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("correspond"));
}
