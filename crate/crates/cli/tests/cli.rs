use std::path::Path;
use std::process::{Command, Output};

use teichflow::flat::{build_counterexample_pair, document, FlatTorus, Surface};

fn teichflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_teichflow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_surface(dir: &Path, name: &str, s: &Surface) -> String {
    let path = dir.join(name);
    std::fs::write(&path, document::to_json(s)).unwrap();
    path.to_str().unwrap().to_string()
}

/// Parses TSV data lines, skipping `#` comments, into a header and rows.
fn tsv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split('\t').map(String::from).collect();
    let rows = lines.map(|l| l.split('\t').map(String::from).collect()).collect();
    (header, rows)
}

fn json_cell(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Null => "NA".into(),
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[test]
fn backtrack_writes_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for format in ["tsv", "json"] {
        let o = teichflow(&[
            "backtrack", "--rays", "3", "--t-span", "6", "--seed", "7", "--out", out, "--format", format,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(dir.path().join(format!("backtrack.{format}")).exists());
    }
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("backtrack.json")).unwrap()).unwrap();
    assert_eq!(json["scenario"], "backtrack");
    assert_eq!(json["provenance"]["config"]["seed"], 7);
    assert_eq!(json["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn tsv_and_json_carry_identical_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for format in ["tsv", "json"] {
        let o = teichflow(&["counterexample", "--d", "4,6", "--out", out, "--format", format]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(dir.path().join("counterexample.tsv")).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("counterexample.json")).unwrap()).unwrap();
    let (header, rows) = tsv(&text);
    let columns: Vec<String> = serde_json::from_value(json["columns"].clone()).unwrap();
    assert_eq!(header, columns);
    let json_rows: Vec<Vec<String>> = json["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(json_cell).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    for (a, b) in rows.iter().zip(&json_rows) {
        for (x, y) in a.iter().zip(b) {
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(u), Ok(v)) => assert_eq!(u, v, "{x} vs {y}"),
                _ => assert_eq!(x, y),
            }
        }
    }
    for (k, v) in json["summary"].as_object().unwrap() {
        let line = text
            .lines()
            .find(|l| l.starts_with(&format!("# summary {k}:")))
            .unwrap_or_else(|| panic!("summary {k} missing from TSV"));
        let tsv_value: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
        assert_eq!(tsv_value, v.as_f64().unwrap(), "{k}");
    }
}

#[test]
fn same_seed_same_bytes() {
    let run = || teichflow(&["fellow-travel", "--lengths", "5,10", "--seed", "3", "--format", "tsv"]).stdout;
    assert_eq!(run(), run());
}

#[test]
fn distance_between_tori() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_surface(dir.path(), "a.json", &Surface::Torus(FlatTorus::square()));
    let b = write_surface(dir.path(), "b.json", &Surface::Torus(FlatTorus::square().flow(2.0)));
    let o = teichflow(&["distance", &a, &b, "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(json["summary"]["total"].as_f64().unwrap() > 0.0);
    assert!(!json["rows"].as_array().unwrap().is_empty());
}

#[test]
fn mismatched_topologies_are_validation_errors() {
    let dir = tempfile::tempdir().unwrap();
    let (q, _) = build_counterexample_pair(4.0, 0.1, 0.1 * (-2.0f64).exp() / 100.0).unwrap();
    let a = write_surface(dir.path(), "a.json", &Surface::Torus(FlatTorus::square()));
    let b = write_surface(dir.path(), "b.json", &Surface::Slit(q));
    let o = teichflow(&["distance", &a, &b]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn unknown_flag_is_a_validation_error() {
    let o = teichflow(&["backtrack", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn bad_parameters_are_validation_errors() {
    assert_eq!(teichflow(&["counterexample", "--d", "1"]).status.code(), Some(1));
    assert_eq!(teichflow(&["backtrack", "--t-span", "100"]).status.code(), Some(1));
    assert_eq!(teichflow(&["describe", "/nonexistent/surface.json"]).status.code(), Some(1));
    assert_eq!(teichflow(&["--format", "xml", "backtrack"]).status.code(), Some(1));
}

#[test]
fn describe_lists_golden_convergents() {
    let o = teichflow(&["describe", "anosov", "--to", "4", "--format", "tsv"]);
    assert!(o.status.success());
    let (header, rows) = tsv(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(header[0], "curve");
    let curves: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    for c in ["1/1", "1/2", "2/3", "3/5", "5/8"] {
        assert!(curves.contains(&c), "{curves:?}");
    }
}

#[test]
fn shadow_of_counterexample_piece() {
    let o = teichflow(&["shadow", "counterexample:4", "--piece", "Y", "--to", "8", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(json["summary"]["max_jump"].as_f64().unwrap() <= 2.0);
}
