use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use slicelab::scalar::Field;
use slicelab::Scalar;
use slicelab_cli::Row;

fn slicelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slicelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn rows(csv_text: &[u8]) -> Vec<Row> {
    csv::Reader::from_reader(csv_text)
        .deserialize()
        .collect::<Result<_, _>>()
        .expect("summary parses")
}

#[test]
fn prop21_default_summary() {
    let out = slicelab(&["verify-prop21", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out.stdout);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].kind, "prop21_lower_bound");
    assert_eq!(rows[0].bound, "99/100");
    assert_eq!(rows[0].bound_approx, "0.990000");
    assert_eq!(rows[0].verdict, "pass");
}

#[test]
fn construct_writes_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = slicelab(&["construct", "--params", r#"{"N": 2}"#, "--out", out_dir]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    let k2 = &report[0]["artifacts"][0]["value"]["stages"][1]["body"]["vertices"];
    assert_eq!(k2[0]["coords"], serde_json::json!(["1", "0"]));
    assert_eq!(k2[1]["coords"], serde_json::json!(["1", "1"]));
    assert!(Path::new(&dir.path().join("summary.csv")).exists());
}

#[test]
fn malformed_spec_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(&spec, r#"{"kind": "prop21", "params": {"eps_prime": "1/0"}}"#).unwrap();
    let out = slicelab(&["verify-prop21", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("params.eps_prime"));

    fs::write(&spec, r#"{"kind": "lemma24"}"#).unwrap();
    let out = slicelab(&["verify-prop21", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tiny_cap_exits_three() {
    let out = slicelab(&["construct", "--params", r#"{"N": 3}"#, "--cap-vertices", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["verify-lemma24", "--params", r#"{"random": 6}"#, "--seed", "11"];
    let a = slicelab(&args);
    let b = slicelab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = slicelab(&["verify-lemma24", "--params", r#"{"random": 6}"#, "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn batch_report_tracks_stage_radii() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("batch.json");
    fs::write(
        &spec,
        r#"[{"kind": "build_stages", "params": {"N": 2}}, {"kind": "build_stages", "params": {"N": 3}}]"#,
    )
    .unwrap();
    let out = slicelab(&["report", "--spec", spec.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out.stdout);
    assert_eq!(rows.len(), 5);
    // Stage dimensions grow and the best certified net radius never increases.
    let deepest: Vec<serde_json::Value> = rows
        .iter()
        .filter(|r| r.truncation == "3")
        .map(|r| serde_json::from_str(&r.parameters).unwrap())
        .collect();
    assert_eq!(deepest.len(), 3);
    let running: Vec<Scalar> = deepest
        .iter()
        .skip(1)
        .map(|p| Field::parse_exact(p["eps_running_min"].as_str().unwrap()).unwrap())
        .collect();
    assert!(running[1] <= running[0]);
    for w in deepest.windows(2) {
        assert!(w[1]["m"].as_u64() > w[0]["m"].as_u64());
    }
}
