//! End-to-end checks of the `dsc` binary: the exit-code contract and the
//! files a run leaves behind.

use std::path::Path;
use std::process::Command;

fn golden(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden/configs")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn count_run_writes_outputs() {
    let out = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_dsc"))
        .args([
            "count",
            "--config",
            &golden("count.json"),
            "--out",
            &out.path().display().to_string(),
            "--jobs",
            "1",
        ])
        .output()
        .unwrap();
    assert!(status.status.success(), "{status:?}");
    assert!(out.path().join("count.csv").exists());
    assert!(out.path().join("count.manifest.json").exists());
    let stdout = String::from_utf8(status.stdout).unwrap();
    assert!(stdout.contains("count.csv"));
}

#[test]
fn excluded_target_exits_2_and_names_the_point() {
    let out = tempfile::tempdir().unwrap();
    let config = out.path().join("bad.json");
    std::fs::write(
        &config,
        r#"{
            "experiment": "count",
            "symbol": {"map": "affine", "c0": [1.5, 0.0], "c1": [0.5, 0.0]},
            "a": 1.0,
            "targets": [[1.5, 0.0]],
            "seed": 1
        }"#,
    )
    .unwrap();
    let result = Command::new(env!("CARGO_BIN_EXE_dsc"))
        .args([
            "count",
            "--config",
            &config.display().to_string(),
            "--out",
            &out.path().display().to_string(),
        ])
        .output()
        .unwrap();
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8(result.stderr).unwrap();
    assert!(
        stderr.contains("1.5") && stderr.contains("phi(+infinity)"),
        "stderr must name the excluded point: {stderr}"
    );
}

#[test]
fn mismatched_subcommand_exits_2() {
    let out = tempfile::tempdir().unwrap();
    let result = Command::new(env!("CARGO_BIN_EXE_dsc"))
        .args([
            "jessen",
            "--config",
            &golden("count.json"),
            "--out",
            &out.path().display().to_string(),
        ])
        .output()
        .unwrap();
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn seed_override_changes_the_manifest() {
    let out = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_dsc"))
        .args([
            "count",
            "--config",
            &golden("count.json"),
            "--seed",
            "99",
            "--out",
            &out.path().display().to_string(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.path().join("count.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["config"]["seed"], 99);
}
