use std::path::Path;
use std::process::{Command, Output};

fn pfvm(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfvm")).args(args).current_dir(cwd).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SMALL: &str = r#"{"mesh": {"box": {"extents": [1, 1, 1], "cells": [4, 4, 4]}}, "t_final": 0.004,
    "snapshot_every": 5, "output_dir": "out"}"#;

#[test]
fn check_mesh_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfvm(&["check-mesh", "box:3x2x4"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("overall: pass"));
    assert!(stdout(&o).contains("mesh norm"));
    assert_eq!(code(&pfvm(&["check-mesh", "box:3x2"], dir.path())), 2);
    assert_eq!(code(&pfvm(&["check-mesh", "missing.pfvm"], dir.path())), 1);
    assert_eq!(code(&pfvm(&["check-mesh"], dir.path())), 2);
    assert_eq!(code(&pfvm(&["gen-box", "--cells", "2,2", "--out", "x.pfvm"], dir.path())), 2);
    // a cell pair whose shared face is not orthogonal to the center segment
    let o = pfvm(&["gen-box", "--cells", "2,1,1", "--out", "two.pfvm"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(code(&pfvm(&["check-mesh", "two.pfvm"], dir.path())), 0);
    let text = std::fs::read_to_string(dir.path().join("two.pfvm")).unwrap();
    let skewed = text.replacen("c 0.25 0.5 0.5", "c 0.25 0.1 0.5", 1);
    assert_ne!(skewed, text);
    std::fs::write(dir.path().join("skewed.pfvm"), skewed).unwrap();
    let o = pfvm(&["check-mesh", "skewed.pfvm"], dir.path());
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("overall: FAIL"));
}

#[test]
fn verify_reports_identities() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfvm(&["verify"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("pyramid identity"));
    assert!(out.contains("inner product vs L2 of S"));
    assert!(out.contains("seminorm vs 3 |grad Q|^2"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("small.json"), SMALL).unwrap();
    let a = pfvm(&["run", "--config", "small.json"], dir.path());
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let first = std::fs::read_to_string(dir.path().join("out/manifest.txt")).unwrap();
    let b = pfvm(&["run", "--config", "small.json"], dir.path());
    assert_eq!(code(&b), 0);
    let second = std::fs::read_to_string(dir.path().join("out/manifest.txt")).unwrap();
    assert_eq!(first, second);
    // the override only changes the recorded output_dir
    let c = pfvm(&["run", "--config", "small.json", "--output", "again"], dir.path());
    assert_eq!(code(&c), 0);
    let third = std::fs::read_to_string(dir.path().join("again/manifest.txt")).unwrap();
    let body = |m: &str| m.lines().filter(|l| !l.ends_with("config.json")).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&first), body(&third));
    for name in ["ledger.csv", "config.json", "snapshot_000000.vtk"] {
        assert!(first.lines().any(|l| l.ends_with(&format!("  {name}"))), "{name} missing");
    }
    assert!(stdout(&a).contains("a priori bound"));
}

#[test]
fn blowup_exits_with_three_and_keeps_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"mesh": {"box": {"extents": [1, 1, 1], "cells": [6, 6, 6]}}, "t_final": 5,
        "integrator": "explicit_euler", "dt": {"policy": "fixed", "value": 0.05}, "output_dir": "out"}"#;
    std::fs::write(dir.path().join("bad.json"), cfg).unwrap();
    let o = pfvm(&["run", "--config", "bad.json"], dir.path());
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = std::fs::read_to_string(dir.path().join("out/manifest.txt")).unwrap();
    assert!(manifest.contains("ledger.csv"));
    assert!(manifest.contains("snapshot_000000.vtk"));
}

#[test]
fn study_writes_one_row_per_level() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"mesh": {"box": {"extents": [1, 1, 1], "cells": [2, 2, 2]}}, "t_final": 0.002}"#;
    std::fs::write(dir.path().join("study.json"), cfg).unwrap();
    let o = pfvm(&["study", "--config", "study.json", "--levels", "4", "--output", "res"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("res/study.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("level,mesh_norm,diff_u,diff_p,order_u,order_p,flux_residual\n"));
    assert_eq!(code(&pfvm(&["study", "--config", "study.json", "--levels", "1"], dir.path())), 2);
}

#[test]
fn usage_and_config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&pfvm(&["run"], dir.path())), 2);
    assert_eq!(code(&pfvm(&["frobnicate"], dir.path())), 2);
    std::fs::write(dir.path().join("typo.json"), r#"{"mesh": {"box": {"extents": [1, 1, 1], "cells": [2, 2, 2]}}, "t_final": 1, "xii": 0.1}"#).unwrap();
    let o = pfvm(&["run", "--config", "typo.json"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("xii"));
    assert_ne!(code(&pfvm(&["run", "--config", "nowhere.json"], dir.path())), 0);
    assert_eq!(code(&pfvm(&["--version"], dir.path())), 0);
}
