//! Exit-code and artifact contract of the `strata` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn strata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strata"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("strata-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn exit_zero_on_clean_verification() {
    let out = strata(&["verify", "half-line", "--seed", "7", "--samples", "100"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict: pass"));
    assert!(stdout.contains("metric-axioms"));
    assert!(stdout.contains("escape-convergence"));
}

#[test]
fn exit_one_on_violations() {
    let out = strata(&["verify", "broken-square", "--samples", "60"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict: fail"));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("triangle violation"), "stderr: {stderr}");
}

#[test]
fn exit_two_on_config_errors() {
    let out = strata(&["verify", "half-line", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(2));

    let out = strata(&["verify", "no-such-space"]);
    assert_eq!(out.status.code(), Some(2));

    let out = strata(&["stratify", "half-line"]);
    assert_eq!(out.status.code(), Some(2), "space passed to stratify");

    let out = strata(&["verify", "half-line", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_three_on_unwritable_output() {
    let dir = tmp("as-directory");
    std::fs::create_dir_all(&dir).unwrap();
    let out = strata(&[
        "verify",
        "half-line",
        "--samples",
        "60",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn reports_are_byte_stable() {
    for format in ["json", "csv"] {
        let a = tmp(&format!("stable-a.{format}"));
        let b = tmp(&format!("stable-b.{format}"));
        for path in [&a, &b] {
            let out = strata(&[
                "report",
                "lollipop",
                "--seed",
                "11",
                "--samples",
                "300",
                "--format",
                format,
                "--out",
                path.to_str().unwrap(),
            ]);
            assert_eq!(out.status.code(), Some(0), "{out:?}");
        }
        let bytes_a = std::fs::read(&a).unwrap();
        let bytes_b = std::fs::read(&b).unwrap();
        assert_eq!(bytes_a, bytes_b, "{format} report not byte-stable");
        std::fs::remove_file(&a).ok();
        std::fs::remove_file(&b).ok();
    }
}

#[test]
fn json_report_mirrors_the_run() {
    let path = tmp("mirror.json");
    let out = strata(&[
        "stratify",
        "spiral-lollipop",
        "--depth",
        "4",
        "--samples",
        "400",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(value["config"]["target"], "spiral-lollipop");
    assert_eq!(value["config"]["depth"], 4);
    assert_eq!(value["terminated"], true);
    assert_eq!(value["levels"].as_array().unwrap().len(), 3);
    // timing is normalized out of the emitted artifact
    for suite in value["suites"].as_array().unwrap() {
        assert_eq!(suite["wall_ms"], 0);
    }
    std::fs::remove_file(&path).ok();
}

#[test]
fn csv_has_one_row_per_suite() {
    let path = tmp("rows.csv");
    let out = strata(&[
        "verify",
        "line",
        "--samples",
        "80",
        "--eps",
        "0.5,0.1",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let suites = stdout.lines().filter(|l| l.starts_with("suite ")).count();
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        csv.lines().count(),
        suites + 1,
        "header plus one row per suite"
    );
    assert!(csv.starts_with("suite,checked,violations,max_slack,wall_ms,verdict\n"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn depth_cap_truncates_without_failing() {
    let out = strata(&["stratify", "lollipop", "--depth", "1", "--samples", "200"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("terminated: false"), "{stdout}");
    assert_eq!(stdout.matches("level ").count(), 1);
}

#[test]
fn identity_stratifies_to_one_empty_level() {
    let out = strata(&["stratify", "identity", "--samples", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("terminated: true"));
    assert_eq!(stdout.matches("level ").count(), 1);
    assert!(stdout.contains("captured=0"));
}

#[test]
fn compactify_prints_probes_with_12_digits() {
    let out = strata(&[
        "compactify",
        "half-line",
        "--point",
        "2.5",
        "--point",
        "10.2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("g=3.33333333333e-1"), "{stdout}");
    assert!(stdout.contains("h=9.09090909091e-2"));
    assert!(stdout.contains("delta(2.5, 10.2) = 4.24242424242e-1"));
}

#[test]
fn custom_space_descriptor_roundtrips() {
    let path = tmp("space.json");
    std::fs::write(
        &path,
        r#"{
            "space": "custom-half",
            "x0": [0.0],
            "branches": [{"form": "affine", "coefficients": [0.0, 1.0]}],
            "exhaustion": {"intervals": "[0,n]", "radii": "1/n", "n_max": 2000}
        }"#,
    )
    .unwrap();
    let out = strata(&["compactify", path.to_str().unwrap(), "--point", "2.5"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("g=3.33333333333e-1"), "{stdout}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn custom_map_descriptor_stratifies() {
    let path = tmp("map.json");
    // a lollipop wrap declared from scratch
    std::fs::write(
        &path,
        r#"{
            "map": "custom-wrap",
            "domain": {
                "space": "custom-half",
                "x0": [0.0],
                "branches": [{"form": "affine", "coefficients": [0.0, 1.0]}]
            },
            "codomain_dim": 2,
            "curves": [{"form": "circle", "coefficients": [0.0, 0.0, 1.0, 1.0]}]
        }"#,
    )
    .unwrap();
    let out = strata(&[
        "stratify",
        path.to_str().unwrap(),
        "--samples",
        "300",
        "--depth",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("terminated: true"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn bad_descriptor_is_a_config_error() {
    let path = tmp("bad.json");
    std::fs::write(&path, r#"{"space": "x", "x0": [], "branches": []}"#).unwrap();
    let out = strata(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(&path).ok();
}
