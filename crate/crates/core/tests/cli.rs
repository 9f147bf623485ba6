use std::process::Command;

fn toda(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_toda")).args(args).env_remove("TODA_MAX_WEYL_ORDER").output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn cells_counts() {
    let (code, out, _) = toda(&["cells", "--type", "A", "--rank", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("degree 0: 4 cells"));
    assert!(out.contains("degree 1: 12 cells"));
    assert!(out.contains("degree 2: 6 cells"));
    assert!(out.contains("euler characteristic: -2"));
    let (code, out, _) = toda(&["cells", "--type", "A", "--rank", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("degree 0: 2 cells") && out.contains("euler characteristic: 0"));
}

#[test]
fn cells_rejects_unknown_type() {
    let (code, _, err) = toda(&["cells", "--type", "Z", "--rank", "2"]);
    assert_ne!(code, 0);
    assert!(err.contains("unknown root type"));
    let (code, _, _) = toda(&["cells", "--type", "G", "--rank", "3"]);
    assert_ne!(code, 0);
}

#[test]
fn cells_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cells.csv");
    let json = dir.path().join("cells.json");
    let mats = dir.path().join("mats");
    let (code, _, _) = toda(&[
        "cells",
        "--type",
        "A",
        "--rank",
        "2",
        "--output",
        csv.to_str().unwrap(),
        "--boundary-dir",
        mats.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 1 + 22);
    assert!(table.starts_with("degree,S,eta,coset_word\n"));
    let d2 = std::fs::read_to_string(mats.join("boundary_2.txt")).unwrap();
    assert!(d2.starts_with("12 6 "));
    let (code, _, _) =
        toda(&["cells", "--type", "A", "--rank", "2", "--format", "json", "--output", json.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["counts"], serde_json::json!([4, 12, 6]));
    assert_eq!(v["cells"].as_array().unwrap().len(), 22);
}

#[test]
fn homology_reports() {
    let (code, out, _) = toda(&["homology", "--type", "A", "--rank", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("H_1 = Z^3 + Z/2"));
    let json = &out[out.find('{').unwrap()..];
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["homology"][1], serde_json::json!({"degree": 1, "free_rank": 3, "torsion": [2]}));
    assert_eq!(v["homology"][2], serde_json::json!({"degree": 2, "free_rank": 0, "torsion": []}));

    let (_, out, _) = toda(&["homology", "--type", "A", "--rank", "1"]);
    assert!(out.contains("H_0 = Z\nH_1 = Z\n"));
    let (_, out, _) = toda(&["homology", "--type", "A", "--rank", "3"]);
    assert!(out.contains("H_1 = Z^6 +"));
}

#[test]
fn morse_closed_forms() {
    let (code, out, _) = toda(&["morse", "--type", "A", "--rank", "3", "--poincare"]);
    assert_eq!(code, 0);
    assert!(out.contains("q^2+6q+11"));
    let (code, out, _) = toda(&["morse", "--type", "A", "--rank", "5", "--betti1"]);
    assert_eq!(code, 0);
    assert!(out.contains("b1 = 15"));
}

#[test]
fn morse_gate() {
    let (code, _, err) = toda(&["morse", "--type", "A", "--rank", "4"]);
    assert_ne!(code, 0);
    assert!(err.contains("--allow-unverified"));
    let (code, _, _) = toda(&["morse", "--type", "B", "--rank", "2"]);
    assert_ne!(code, 0);
}

#[test]
fn morse_report_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("morse.json");
    let dot = dir.path().join("morse.dot");
    let (code, out, _) = toda(&[
        "morse",
        "--type",
        "A",
        "--rank",
        "2",
        "--complex",
        "--betti",
        "1",
        "--betti",
        "2",
        "--principal",
        "--output",
        json.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["morse"]["homology"][1]["free_rank"], 3);
    assert_eq!(v["conjectured_betti"][0]["value"], 3);
    assert_eq!(v["conjectured_betti"][1]["value"], 0);
    assert_eq!(v["conjectured_betti"][1]["conjecture"], true);
    assert_eq!(v["principal_graph"]["components"].as_array().unwrap().len(), 3);
    let d = std::fs::read_to_string(&dot).unwrap();
    assert!(d.starts_with("digraph morse"));
    assert!(d.contains("label=\"2\"") || d.contains("label=\"-2\""));
}

#[test]
fn simulate_definite_and_blowup() {
    let (code, out, _) = toda(&["simulate", "--type", "A", "--rank", "2", "--signs", "++", "--tmax", "5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out[out.find('{').unwrap()..]).unwrap();
    assert!(v["blowup_time"].is_null());
    assert!(v["max_invariant_drift"].as_f64().unwrap() < 1e-8);

    let (code, out, _) = toda(&["simulate", "--type", "A", "--rank", "1", "--signs", "-"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out[out.find('{').unwrap()..]).unwrap();
    let t = v["blowup_time"].as_f64().unwrap();
    assert!((t - std::f64::consts::FRAC_PI_2).abs() < 0.01);
}

#[test]
fn simulate_length_mismatch() {
    let (code, _, err) = toda(&["simulate", "--signs", "+++", "--rank", "2"]);
    assert_ne!(code, 0);
    assert!(err.contains("rank mismatch"));
}

#[test]
fn simulate_trajectory_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let summary = dir.path().join("summary.json");
    let (code, _, _) = toda(&[
        "simulate",
        "--rank",
        "2",
        "--signs",
        "+-",
        "--a",
        "0.1,-0.2",
        "--tmax",
        "0.5",
        "--dt",
        "0.01",
        "--output",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,a1,a2,b1,b2,I1,I2");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(v["signs"], "+-");
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn order_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_toda"))
        .args(["cells", "--type", "A", "--rank", "3"])
        .env("TODA_MAX_WEYL_ORDER", "10")
        .output()
        .unwrap();
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("more than 10 elements"));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for n in 0..2 {
        let p = dir.path().join(format!("m{n}.json"));
        let (code, stdout, _) =
            toda(&["morse", "--type", "A", "--rank", "3", "--complex", "--poincare", "--output", p.to_str().unwrap()]);
        assert_eq!(code, 0);
        outputs.push((stdout, std::fs::read(&p).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}
