use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("../core/tests/data/corpus/{name}.json"))
}

fn cremona(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cremona"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn classify_degree_six() {
    let o = cremona(&[
        "classify",
        "--input",
        corpus("family03_degree6").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["outcome"], "maximal");
    assert_eq!(v["family"], 3);
}

#[test]
fn classify_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let input = corpus("reduction_degree7");
    let args = [
        "classify",
        "--input",
        input.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ];
    assert_eq!(cremona(&args).status.code(), Some(0));
    let first = fs::read_to_string(&out).unwrap();
    assert_eq!(cremona(&args).status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        first,
        "reports must be byte-stable"
    );
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["outcome"], "not_maximal");
    assert_eq!(v["result"]["family"], 2);
}

#[test]
fn minus_one_count() {
    let o = cremona(&["lattice", "minus-one-count", "--r", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["count"], 27);
}

#[test]
fn uncertified_z22_is_indeterminate() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(
        &dir,
        "z22.json",
        r#"{"kind": "z22", "triplet": {
            "A1": [[0, 1], [1, 1], [2, 1], [3, 1]],
            "A2": [[2, 1], [3, 1], [4, 1], [5, 1]],
            "A3": [[0, 1], [1, 1], [4, 1], [5, 1]]}}"#,
    );
    let o = cremona(&["classify", "--input", &input]);
    assert_eq!(o.status.code(), Some(2));
    let v = stdout_json(&o);
    assert_eq!(v["outcome"], "indeterminate");
    assert!(v["reason"].as_str().is_some_and(|r| !r.is_empty()));
}

#[test]
fn invalid_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let truncated = write_temp(&dir, "a.json", "{\"kind\": \"del_pezzo\",\n  \"degree\": ");
    let o = cremona(&["classify", "--input", &truncated]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let unknown = write_temp(
        &dir,
        "b.json",
        r#"{"kind": "del_pezzo", "degree": 5, "colour": 1}"#,
    );
    let o = cremona(&["classify", "--input", &unknown]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
    let o = cremona(&[
        "classify",
        "--input",
        dir.path().join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn links_report() {
    let o = cremona(&[
        "classify",
        "--links",
        "--input",
        corpus("family04_hirzebruch3").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    for t in ["I", "II", "III", "IV"] {
        assert_eq!(v["links"]["links"][t]["status"], "excluded", "type {t}");
    }
    assert_eq!(v["verdict"]["family"], 4);
}

#[test]
fn construct_four_lines() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(
        &dir,
        "q.json",
        r#"{"lines": [[1, 0, 0], [0, 1, 0], [1, 1, -1], [1, -2, -3]], "q": [3, 5, 7]}"#,
    );
    let o = cremona(&["construct", "four-lines", "--input", &input]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["model"]["profile"], serde_json::json!([2, 2, 2]));
    assert_eq!(v["del_pezzo"]["kind"], "no");
}

#[test]
fn construct_exceptional() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(
        &dir,
        "d.json",
        r#"{"delta": [[0, 1], [1, 1], [1, 0], [2, 1]]}"#,
    );
    let o = cremona(&["construct", "exceptional", "--input", &input]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["eigen_multiplicities"]["plus"], 2);
    assert_eq!(v["eigen_multiplicities"]["minus"], 4);
}

#[test]
fn canonical_triplet_is_mobius_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_temp(
        &dir,
        "a.json",
        r#"{"A1": [[0, 1], [1, 1]], "A2": [[1, 1], [2, 1]], "A3": [[0, 1], [2, 1]]}"#,
    );
    // x ↦ x + 5
    let b = write_temp(
        &dir,
        "b.json",
        r#"{"A1": [[5, 1], [6, 1]], "A2": [[6, 1], [7, 1]], "A3": [[5, 1], [7, 1]]}"#,
    );
    let ca = cremona(&["canonical", "triplet", "--input", &a]);
    let cb = cremona(&["canonical", "triplet", "--input", &b]);
    assert_eq!(ca.status.code(), Some(0));
    assert_eq!(ca.stdout, cb.stdout);
}

#[test]
fn genus_of_a_cubic() {
    let o = cremona(&["lattice", "genus", "--class", "[3, -1, -1, -1]"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["genus"], 1);
    assert_eq!(v["square"], 6);
}

#[test]
fn verify_all_suites() {
    let o = cremona(&["verify", "--suite", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_object().unwrap().len(), 5);
    assert_eq!(
        cremona(&["verify", "--suite", "nope"]).status.code(),
        Some(1)
    );
}
