use std::fs;
use std::process::{Command, Output};

use cloneforge::report::validate_document;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cloneforge"))
        .args(args)
        .env_remove("CLONEFORGE_SEED")
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    validate_document(&doc).expect("document matches the schema");
    doc
}

fn close(v: &Value, want: f64, tol: f64) {
    let x = v.as_f64().expect("number");
    assert!((x - want).abs() <= tol, "{x} vs {want}");
}

#[test]
fn hadamard_bell_state() {
    let doc = json_of(&["bell", "--family", "hadamard", "--m", "0", "--n", "1"]);
    let amps = doc["outputs"]["amplitudes"].as_array().unwrap();
    for (i, z) in amps.iter().enumerate() {
        let re = z[0].as_f64().unwrap();
        if i % 5 == 0 {
            assert_eq!(re.abs(), 0.5);
        } else {
            assert_eq!(re, 0.0);
        }
        assert_eq!(z[1].as_f64().unwrap(), 0.0);
    }
    assert!(doc["outputs"]["parity_signature"].is_string());
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn qubit_bell_state() {
    let doc = json_of(&["bell", "--family", "fourier", "--dim", "2", "--m", "0", "--n", "0"]);
    let amps = doc["outputs"]["amplitudes"].as_array().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (z, want) in amps.iter().zip([h, 0.0, 0.0, h]) {
        close(&z[0], want, 1e-15);
        close(&z[1], 0.0, 1e-15);
    }
}

#[test]
fn bad_index_is_an_argument_error() {
    let out = run(&["bell", "--family", "fourier", "--m", "4", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
    let out = run(&["bell", "--family", "hadamard", "--dim", "3", "--m", "0", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bell", "--family", "sideways", "--m", "0", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn covariance_class_counts() {
    for (pair, bell, count) in
        [("comp-fourier", "fourier", 6), ("comp-hadamard", "fourier", 5), ("comp-hadamard", "hadamard", 10)]
    {
        let doc = json_of(&["covariance", "--pair", pair, "--bell", bell]);
        assert_eq!(doc["outputs"]["num_classes"], count, "{pair} {bell}");
        assert_eq!(doc["outputs"]["free_parameters"], count - 1);
        assert_eq!(doc["outputs"]["pattern"]["classes"].as_array().unwrap().len(), count);
    }
    let out = run(&["covariance", "--pair", "comp-fourier", "--bell", "hadamard"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tradeoff_symmetric_points() {
    for (pair, bell, want, tol) in [
        ("comp-hadamard", "fourier", 0.7018, 1e-3),
        ("comp-fourier", "fourier", 0.75, 1e-4),
        ("comp-hadamard", "hadamard", 0.75, 1e-4),
    ] {
        let doc = json_of(&["tradeoff", "--pair", pair, "--bell", bell, "--grid", "1000"]);
        close(&doc["outputs"]["symmetric_point"]["F"], want, tol);
        close(&doc["outputs"]["grid_crossing"], want, tol);
    }
}

#[test]
fn tradeoff_csv_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.csv");
    let summary = dir.path().join("summary.json");
    let args = [
        "tradeoff", "--pair", "comp-fourier", "--bell", "fourier", "--grid", "40",
        "--curve", curve.to_str().unwrap(), "--out", summary.to_str().unwrap(),
    ];
    assert_eq!(run(&args).status.code(), Some(0));
    let first = (fs::read(&curve).unwrap(), fs::read(&summary).unwrap());
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(first, (fs::read(&curve).unwrap(), fs::read(&summary).unwrap()));

    let text = String::from_utf8(first.0).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("F_A,F_B,a,b,c"));
    assert_eq!(lines.count(), 40);

    let out = run(&["tradeoff", "--pair", "comp-fourier", "--bell", "fourier", "--grid", "40", "--csv"]);
    assert_eq!(out.stdout, text.as_bytes());
}

#[test]
fn tradeoff_rejects_small_grid() {
    let out = run(&["tradeoff", "--pair", "comp-fourier", "--bell", "fourier", "--grid", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn clone_report_fields() {
    let doc = json_of(&["clone-report", "--pair", "comp-fourier", "--bell", "fourier"]);
    let o = &doc["outputs"];
    for key in ["F_A", "F_B", "D_A", "D_B", "H_p", "H_q", "I_AB", "I_AE", "secure", "a_matrix", "b_matrix"] {
        assert!(o.get(key).is_some(), "missing {key}");
    }
    close(&o["F_A"], 0.75, 1e-4);
    close(&o["I_AB"], 0.792, 1e-3);

    let doc = json_of(&["clone-report", "--pair", "comp-fourier", "--bell", "fourier", "--params", "3,1,0.3333333333333333"]);
    close(&doc["outputs"]["F_A"], 0.75, 1e-9);
    for d in doc["outputs"]["D_A"].as_array().unwrap() {
        close(d, 1.0 / 12.0, 1e-9);
    }

    let out = run(&["clone-report", "--pair", "comp-fourier", "--bell", "fourier", "--params", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn universal_report() {
    let doc = json_of(&["universal", "--dim", "4"]);
    close(&doc["outputs"]["F_A"], 0.7, 1e-9);
    close(&doc["outputs"]["params"][0], 10f64.sqrt() / 4.0, 1e-12);
    close(&doc["outputs"]["params"][1], 10f64.sqrt() / 20.0, 1e-12);
    let doc = json_of(&["universal", "--dim", "7"]);
    close(&doc["outputs"]["F_A"], 10.0 / 16.0, 1e-9);
}

#[test]
fn verify_all_passes() {
    let doc = json_of(&["verify", "all"]);
    assert!(doc["checks"].as_array().unwrap().len() > 20);
}

#[test]
fn verify_seed_sources() {
    let doc = json_of(&["verify", "entropy", "--seed", "11"]);
    assert_eq!(doc["inputs"]["seed"], 11);
    assert!(doc["outputs"]["min_entropy_sum"].as_f64().unwrap() >= 4.0 - 1e-9);

    let out = Command::new(env!("CARGO_BIN_EXE_cloneforge"))
        .args(["verify", "qubit-theorem"])
        .env("CLONEFORGE_SEED", "23")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["inputs"]["seed"], 23);
    assert_eq!(doc["outputs"]["trials"], 1000);
}

#[test]
fn csv_flag_is_tradeoff_only() {
    let out = run(&["verify", "bell", "--csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "bell", "--csv", "--json"]);
    assert_eq!(out.status.code(), Some(2));
}
