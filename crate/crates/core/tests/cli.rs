// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qperceptron")).args(args).output().expect("spawn qperceptron")
}

fn code(args: &[&str]) -> i32 {
    qp(args).status.code().unwrap()
}

fn data_rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["response", "--points", "0"]), 2);
    assert_eq!(code(&["response", "--schedule", "cubic"]), 2);
    assert_eq!(code(&["benchmark", "--tf-points", "0"]), 2);
    assert_eq!(code(&["synthesize", "--m1", "2", "--m2", "1"]), 2);
    assert_eq!(code(&["synthesize", "--target", "peak", "--m1", "1", "--m2", "1"]), 2);
    assert_eq!(code(&["train", "--bits", "1"]), 2);
    assert_eq!(code(&["--threads", "0", "train"]), 2);
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn unwritable_output_is_a_runtime_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("r.csv");
    assert_eq!(code(&["response", "--points", "3", "--out", out.to_str().unwrap()]), 1);
}

#[test]
fn response_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = qp(&["--threads", "1", "response", "--schedule", "linear", "--tf", "5", "--points", "5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.lines().next().unwrap().starts_with("# units"));
    assert!(text.contains("\nx,p_excite,g_ideal\n"));
    assert!(!text.contains('\r'));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][0], -10.0);
    assert!((rows[2][1] - 0.5).abs() < 1e-9);
    assert!(rows.iter().all(|r| r.len() == 3 && (0.0..=1.0).contains(&r[1])));
}

#[test]
fn train_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert_eq!(code(&["train", "--bits", "2", "--hidden", "2", "--seed", "3", "--out", p.to_str().unwrap()]), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let report: serde_json::Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_eq!(report["accuracy"], 1.0);
    let model = qperceptron::network::NetworkSpec::load(&dir.path().join("a.model.json")).unwrap();
    assert_eq!(model.layer_sizes, vec![2, 1]);
}

#[test]
fn three_bit_primes_are_learned() {
    let o = qp(&["train", "--bits", "3", "--hidden", "4"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["accuracy"], 1.0);
}

#[test]
fn synthesized_window_meets_margins() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    assert_eq!(code(&["synthesize", "--target", "rect", "--m1", "0.5", "--m2", "2.5", "--out", out.to_str().unwrap()]), 0);
    for r in data_rows(&out) {
        let (x, p) = (r[0], r[3]);
        if x > 0.5 && x < 2.5 {
            assert!(p >= 0.95, "x = {x}: {p}");
        } else {
            assert!(p <= 0.05, "x = {x}: {p}");
        }
    }
}

#[test]
fn synthesized_peak_is_unimodal() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    assert_eq!(code(&["synthesize", "--target", "peak", "--m1", "0", "--m2", "2", "--out", out.to_str().unwrap()]), 0);
    let p: Vec<f64> = data_rows(&out).iter().map(|r| r[3]).collect();
    let top = p.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert!(p[..=top].windows(2).all(|w| w[1] >= w[0] - 1e-12));
    assert!(p[top..].windows(2).all(|w| w[1] <= w[0] + 1e-12));
}

#[test]
fn benchmark_writes_fit_next_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let o = qp(&["benchmark", "--tf-min", "0.5", "--tf-max", "4", "--tf-points", "4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 4);
    assert!(rows.windows(2).all(|w| w[1][2] <= w[0][2] + 1e-12));
    let fit: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("bench.fit.json")).unwrap()).unwrap();
    assert!(fit["c2"].as_f64().unwrap() > 0.0);
}
