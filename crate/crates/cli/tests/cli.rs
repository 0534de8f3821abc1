use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn flatspan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatspan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn enumerate_prints_count() {
    let dir = TempDir::new().unwrap();
    let p = file(
        &dir,
        "g.txt",
        "# four generic points\n0,0,0\n1,0,0\n0,1,0\n0,0,1\n",
    );
    let o = flatspan(&["enumerate", s(&p), "-f", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "4");
}

#[test]
fn enumerate_writes_export() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "g.txt", "0,0\n1,0\n2,0\n0,1\n");
    let out = dir.path().join("lines.json");
    let o = flatspan(&["enumerate", s(&p), "-f", "1", "--out", s(&out)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "4");
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["count"], 4);
    assert_eq!(
        doc["flats"][0]["point_indices"],
        serde_json::json!([0, 1, 2])
    );
    assert_eq!(doc["flats"][0]["constraints"], serde_json::json!(["0,1,0"]));
}

#[test]
fn purdy_file_spans_fifteen_hyperplanes() {
    let dir = TempDir::new().unwrap();
    let pts = dir.path().join("purdy.txt");
    let o = flatspan(&[
        "--seed",
        "11",
        "construct",
        "purdy",
        "--d",
        "4",
        "--k",
        "2",
        "--out",
        s(&pts),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(json(&o)["n"], 6);
    let o = flatspan(&["enumerate", s(&pts), "-f", "3"]);
    assert_eq!(stdout(&o).trim(), "15");
    let o = flatspan(&["enumerate", s(&pts), "-f", "2"]);
    assert_eq!(stdout(&o).trim(), "20");
}

#[test]
fn empty_file_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "empty.txt", "");
    let o = flatspan(&["enumerate", s(&p), "-f", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty hull"), "{}", stderr(&o));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "bad.txt", "0,0\n1,1\n1,oops\n");
    let o = flatspan(&["enumerate", s(&p), "-f", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let o = flatspan(&["enumerate", "/nonexistent/points.txt", "-f", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_purdy_table() {
    let o = flatspan(&["verify-purdy", "-d", "4", "-k", "2..3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc = json(&o);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["summary"]["mismatches"], 0);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["h_enumerated"], 30);
    assert_eq!(rows[1]["g_enumerated"], 45);
    assert_eq!(rows[1]["g_exceeds_h"], true);
}

#[test]
fn verify_purdy_rejects_k_one() {
    let o = flatspan(&["verify-purdy", "-d", "4", "-k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("k >= 2 required"));
}

#[test]
fn fit_power_law_and_rejects_nonpositive() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "s.txt", "1,1\n2,4\n4,16\n");
    let o = flatspan(&["fit", s(&p)]);
    let slope = json(&o)["slope"].as_f64().unwrap();
    assert!((slope - 2.0).abs() < 1e-9);
    let p = file(&dir, "bad.txt", "1,1\n2,-3\n");
    assert_eq!(flatspan(&["fit", s(&p)]).status.code(), Some(2));
}

#[test]
fn constructed_arrangement_round_trips_through_incidences() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let o = flatspan(&[
        "construct",
        "bichromatic",
        "--d",
        "3",
        "--n",
        "8",
        "--k",
        "4",
        "--m",
        "32",
        "--out",
        s(&a),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let expected = json(&o)["expected_red_incidences"].clone();
    let o = flatspan(&["incidences", s(&a)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc = json(&o);
    assert_eq!(doc["red_incidences"], expected);
    assert_eq!(doc["all_vertices"], true);
}

#[test]
fn non_vertex_is_a_verification_failure() {
    let dir = TempDir::new().unwrap();
    let a = file(
        &dir,
        "a.json",
        r#"{"d":2,"red":["1,0,0"],"blue":["0,1,0"],"vertices":["0,0","5,5"]}"#,
    );
    let o = flatspan(&["incidences", s(&a)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not a vertex"), "{}", stderr(&o));
}

#[test]
fn erdos_grid_example() {
    let o = flatspan(&["construct", "erdos2d", "--r", "2", "--s", "2"]);
    let doc = json(&o);
    assert_eq!(doc["summary"]["vertices"], 4);
    assert_eq!(doc["summary"]["incidences"], 8);
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 4);
}

#[test]
fn monochromatic_sweep_counts_everything() {
    let o = flatspan(&[
        "envelope-sweep",
        "--construction",
        "thetamk",
        "--k-ratio",
        "1",
        "--n0",
        "8",
        "--steps",
        "3",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for row in json(&o)["rows"].as_array().unwrap() {
        assert_eq!(row["red_incidences"], row["total_incidences"]);
        assert_eq!(row["warning"], "");
    }
}

#[test]
fn outputs_do_not_depend_on_jobs() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec!["beck3", "--n", "12", "--k", "3", "--seeds", "3"],
        vec![
            "conjecture-search",
            "--d",
            "3",
            "--n",
            "7",
            "--samples",
            "12",
        ],
        vec!["envelope-sweep", "--format", "csv", "--steps", "3"],
    ] {
        let mut outputs = Vec::new();
        for jobs in ["1", "3"] {
            let out = dir.path().join(format!("{}-{jobs}", args[0]));
            let mut full = vec!["--seed", "9", "--jobs", jobs, "--out", s(&out)];
            full.extend(&args);
            let o = flatspan(&full);
            assert!(o.status.success(), "{}", stderr(&o));
            outputs.push(fs::read(&out).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{}", args[0]);
    }
}

#[test]
fn beck3_rejects_k_zero() {
    let o = flatspan(&["beck3", "--n", "10", "--k", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coplanar_input_is_filtered_as_degenerate() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "c.txt", "0,0,0\n1,0,0\n0,1,0\n2,3,0\n5,1,0\n");
    let o = flatspan(&["conjecture-search", "--input", s(&p)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(json(&o)["degenerate"], true);
}

#[test]
fn csv_carries_provenance_header() {
    let o = flatspan(&[
        "--seed",
        "4",
        "--format",
        "csv",
        "verify-purdy",
        "-d",
        "4",
        "-k",
        "2",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("# schema_version=1"));
    assert!(text.contains("# seed=4"));
    assert!(text.contains("\nd,k,n,seed,"));
}
