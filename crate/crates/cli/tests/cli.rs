use std::fs;
use std::process::{Command, Output};

fn qcbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn flower_transposition_bound() {
    let out = qcbound(&["bound", "--bound", "transposition", "--channel-family", "flower", "--d", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["targets"], "Q_two_way");
    assert_eq!(v["direction"], "upper");
    let bits = v["bits"].as_f64().unwrap();
    assert!(bits >= 3f64.log2() - 1e-9, "{bits}");
}

#[test]
fn state_divergence_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let rho = dir.path().join("rho.json");
    let sigma = dir.path().join("sigma.json");
    let out = qcbound(&["state", "--family", "random", "--dims", "2,2", "--seed", "3", "--out", rho.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = qcbound(&["state", "--family", "random", "--dims", "2,2", "--seed", "4", "--out", sigma.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let same = qcbound(&["divergence", "--alpha", "inf", "--rho", rho.to_str().unwrap(), "--sigma", rho.to_str().unwrap()]);
    assert_eq!(same.status.code(), Some(0));
    let v = stdout_json(&same);
    assert_eq!(v["alpha"], "inf");
    assert!(v["bits"].as_f64().unwrap().abs() < 1e-8);

    let d2 = qcbound(&["divergence", "--alpha", "2", "--rho", rho.to_str().unwrap(), "--sigma", sigma.to_str().unwrap()]);
    let dinf = qcbound(&["divergence", "--alpha", "inf", "--rho", rho.to_str().unwrap(), "--sigma", sigma.to_str().unwrap()]);
    let b2 = stdout_json(&d2)["bits"].as_f64().unwrap();
    let binf = stdout_json(&dinf)["bits"].as_f64().unwrap();
    assert!(b2 > 0.0 && b2 <= binf + 1e-9, "{b2} {binf}");
}

#[test]
fn malformed_json_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\n  \"re\": [1,\n").unwrap();
    let out = qcbound(&["divergence", "--alpha", "2", "--rho", bad.to_str().unwrap(), "--sigma", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn invalid_inputs_exit_with_two() {
    let out = qcbound(&["channel", "--channel-family", "depolarizing", "--p", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qcbound(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qcbound(&["state", "--family", "flower", "--d", "2", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qcbound(&["divergence", "--alpha", "2", "--rho", "/nonexistent.json", "--sigma", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_output_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gap.csv");
    let out = qcbound(&["bound", "--bound", "pbit-gap", "--d", "4", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!out.stdout.is_empty(), "summary goes to stdout");
    let csv = fs::read_to_string(&path).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "bound,targets,direction,bits,method,relaxation");
    assert_eq!(lines.len(), 3);
}

#[test]
fn sweep_emits_one_row_per_point() {
    let out = qcbound(&[
        "bound", "--bound", "transposition", "--channel-family", "depolarizing", "--d", "2", "--sweep", "0:1:5", "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 6);
}

#[test]
fn verify_all_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = qcbound(&["verify", "--suite", "all", "--seed", "42", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["seed"], 42);
    assert!(v["cases"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}
