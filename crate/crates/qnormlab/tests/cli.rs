//! End-to-end runs of the binary: exit codes, output documents, file writing.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qnormlab::holder::HolderInstance;
use qnormlab::space::SparseVector;
use qnormlab::topology::{ExponentFunction, NeighborhoodSpec};

fn qnormlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnormlab"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

fn write_default_basis(dir: &Path, length: usize) -> std::path::PathBuf {
    let path = dir.join("basis.json");
    let out = qnormlab(&[
        "build-basis",
        "--length",
        &length.to_string(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "build failed: {}", stderr(&out));
    path
}

fn write_unit_vector(dir: &Path, i: u32) -> std::path::PathBuf {
    let path = dir.join(format!("delta{i}.json"));
    fs::write(
        &path,
        serde_json::to_string(&SparseVector::unit(i)).unwrap(),
    )
    .unwrap();
    path
}

#[test]
fn build_basis_emits_a_certified_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_default_basis(dir.path(), 6);
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let elements = doc["elements"].as_array().unwrap();
    assert_eq!(elements.len(), 6);
    assert!(elements[0]["cert"]["d"].as_f64().unwrap() > 0.0);
}

#[test]
fn norms_reports_the_closed_forms_for_the_first_coordinate() {
    let dir = tempfile::tempdir().unwrap();
    let basis = write_default_basis(dir.path(), 6);
    let vector = write_unit_vector(dir.path(), 1);
    let out = qnormlab(&[
        "norms",
        "--basis",
        basis.to_str().unwrap(),
        "--vector",
        vector.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows[0]["fnorm_p"].as_f64().unwrap(), 1.0);
    assert_eq!(rows[0]["norm_e"].as_f64().unwrap(), 0.5);
}

#[test]
fn np_norm_prints_agreeing_routes_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let basis = write_default_basis(dir.path(), 6);
    let vector = write_unit_vector(dir.path(), 2);
    let out = qnormlab(&[
        "np-norm",
        "--basis",
        basis.to_str().unwrap(),
        "--vector",
        vector.to_str().unwrap(),
        "--n",
        "2",
        "--exponent",
        "0.5",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("n,value,dp_value,routes_agree"));
    assert!(text.contains(",true"));
}

#[test]
fn demo_defaults_reach_the_evidence_verdict() {
    let out = qnormlab(&["demo-weaker-topology"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("weaker-topology evidence"));
}

#[test]
fn demo_csv_lists_the_witness_table() {
    let out = qnormlab(&["demo-weaker-topology", "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("k,fnorm_p,norm_E,spec1_member,spec1_k0"));
    assert!(text.contains("\n1,1,0.5,"));
}

#[test]
fn demo_flags_specs_that_never_stabilize() {
    let dir = tempfile::tempdir().unwrap();
    let basis = write_default_basis(dir.path(), 6);
    // the n=8 neighborhood needs k >= 16, far past a length-6 scan
    let specs = vec![
        NeighborhoodSpec::new(1, ExponentFunction::constant(0.5, 1).unwrap(), 0.0).unwrap(),
        NeighborhoodSpec::new(8, ExponentFunction::constant(0.5, 8).unwrap(), 0.0).unwrap(),
    ];
    let specs_path = dir.path().join("specs.json");
    fs::write(&specs_path, serde_json::to_string(&specs).unwrap()).unwrap();
    let out = qnormlab(&[
        "demo-weaker-topology",
        "--basis",
        basis.to_str().unwrap(),
        "--specs",
        specs_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("never stabilized"));
}

#[test]
fn verify_passes_on_defaults_and_rejects_a_tampered_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let basis = write_default_basis(dir.path(), 6);

    let out = qnormlab(&["verify", "--basis", basis.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["passed"], serde_json::Value::Bool(true));

    let mut tampered: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&basis).unwrap()).unwrap();
    let d = tampered["elements"][0]["cert"]["d"].as_f64().unwrap();
    tampered["elements"][0]["cert"]["d"] = serde_json::json!(d * 10.0);
    let tampered_path = dir.path().join("tampered.json");
    fs::write(&tampered_path, serde_json::to_string(&tampered).unwrap()).unwrap();

    let out = qnormlab(&["verify", "--basis", tampered_path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("verification failed"));
}

#[test]
fn missing_input_is_a_data_error() {
    let out = qnormlab(&[
        "norms",
        "--basis",
        "/nonexistent/basis.json",
        "--vector",
        "/nonexistent/vector.json",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn holder_check_accepts_a_valid_instance_list() {
    let dir = tempfile::tempdir().unwrap();
    let list = vec![
        HolderInstance::new(vec![1.0], vec![1.0], vec![1.0], 0.5, 0.5).unwrap(),
        HolderInstance::new(
            vec![2.0, 1.0],
            vec![0.5, 1.5],
            vec![0.5, 0.25, 0.25],
            0.5,
            0.25,
        )
        .unwrap(),
    ];
    let path = dir.path().join("instances.json");
    fs::write(&path, serde_json::to_string(&list).unwrap()).unwrap();
    let out = qnormlab(&["holder-check", "--instances", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(rows
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["passed"] == serde_json::Value::Bool(true)));
}

#[test]
fn unparseable_tol_env_falls_back_to_the_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_qnormlab"))
        .args(["verify", "--samples", "50"])
        .env("QNORMLAB_TOL", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn out_flag_writes_the_document_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let basis = write_default_basis(dir.path(), 6);
    let vector = write_unit_vector(dir.path(), 3);
    let report = dir.path().join("norms.json");
    let out = qnormlab(&[
        "norms",
        "--basis",
        basis.to_str().unwrap(),
        "--vector",
        vector.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).is_empty());
    let rows: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(rows[0]["norm_e"].as_f64().unwrap() > 0.0);
}
