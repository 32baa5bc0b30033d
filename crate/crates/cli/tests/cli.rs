use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn gbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbc")).args(args).output().expect("run gbc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn polygon_file(dir: &TempDir, name: &str, vertices: &[(f64, f64)]) -> PathBuf {
    let path = dir.path().join(name);
    let v: Vec<[f64; 2]> = vertices.iter().map(|&(x, y)| [x, y]).collect();
    fs::write(&path, serde_json::json!({ "vertices": v }).to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SQUARE: [(f64, f64); 4] = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];

fn pentagon(apex: f64) -> [(f64, f64); 5] {
    [(-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (0.0, apex)]
}

#[test]
fn eval_square_center() {
    let dir = TempDir::new().unwrap();
    let sq = polygon_file(&dir, "sq.json", &SQUARE);
    let o = gbc(&["eval", "--polygon", s(&sq), "--kind", "mvc", "--point", "0.5,0.5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "ok");
    for v in &row[3..7] {
        assert!((v.parse::<f64>().unwrap() - 0.25).abs() < 1e-15);
    }
}

#[test]
fn eval_flags_outside_points_and_continues() {
    let dir = TempDir::new().unwrap();
    let sq = polygon_file(&dir, "sq.json", &SQUARE);
    let o = gbc(&["eval", "--polygon", s(&sq), "--point", "2,2", "--point", "0.25,0.75"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert!(rows[0].starts_with("2,2,outside,"));
    assert!(rows[1].contains(",ok,"));
}

#[test]
fn wachspress_on_degenerate_octagon_fails() {
    let dir = TempDir::new().unwrap();
    let oct = [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (1.0, 0.5), (1.0, 1.0), (0.5, 1.0), (0.0, 1.0), (0.0, 0.5)];
    let p = polygon_file(&dir, "oct.json", &oct);
    let o = gbc(&["eval", "--polygon", s(&p), "--kind", "wachspress", "--point", "0.5,0.5"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("interior angle of pi"));
    // Mean value coordinates are fine on the same polygon.
    assert!(gbc(&["eval", "--polygon", s(&p), "--point", "0.5,0.5"]).status.success());
}

#[test]
fn eval_grid_row_count() {
    let dir = TempDir::new().unwrap();
    let p = polygon_file(&dir, "pent.json", &pentagon(1.5));
    let o = gbc(&["eval", "--polygon", s(&p), "--grid", "64"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 4096);
}

#[test]
fn eval_scan_and_dump() {
    let dir = TempDir::new().unwrap();
    let p = polygon_file(&dir, "pent.json", &pentagon(1.5));
    let dump = dir.path().join("dump.csv");
    let o = gbc(&["eval", "--polygon", s(&p), "--scan", "--grid", "32", "--dump", s(&dump)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("vertex_index,max_grad_norm"));
    assert_eq!(out.lines().count(), 6);
    let d = fs::read_to_string(&dump).unwrap();
    assert_eq!(d.lines().next(), Some("x,y,i,lambda_i,grad_x,grad_y"));
    assert_eq!((d.lines().count() - 1) % 5, 0);
}

#[test]
fn check_polygon_verdicts() {
    let dir = TempDir::new().unwrap();
    let sq = polygon_file(&dir, "sq.json", &SQUARE);
    let o = gbc(&["check-polygon", "--polygon", s(&sq), "--gamma-star", "6", "--d-star", "0.1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("G1 gamma < 6: PASS") && out.contains("G2 d_min > 0.1: PASS"), "{out}");
    assert!(out.contains("| gamma | 2.82843e0 |"));

    let flat = polygon_file(&dir, "flat.json", &pentagon(1.001));
    let out = stdout(&gbc(&["check-polygon", "--polygon", s(&flat)]));
    assert!(out.contains("G1 gamma < 6: PASS") && out.contains("G2 d_min > 0.1: PASS"), "{out}");

    let needle = polygon_file(&dir, "needle.json", &[(0.0, 0.0), (10.0, 0.0), (10.0, 1.0), (0.0, 1.0)]);
    let o = gbc(&["check-polygon", "--polygon", s(&needle), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["g1"], "FAIL");
    assert!(v["normalized"]["aspect_ratio"].as_f64().unwrap() > 20.0);
}

#[test]
fn bad_polygon_files_are_errors() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"vertices": [[0,0],[1,0],[1,1]], "extra": 1}"#).unwrap();
    assert_eq!(gbc(&["check-polygon", "--polygon", s(&path)]).status.code(), Some(2));
    let concave = polygon_file(&dir, "concave.json", &[(0.0, 0.0), (2.0, 0.0), (1.0, 0.2), (2.0, 2.0), (0.0, 2.0)]);
    assert_eq!(gbc(&["check-polygon", "--polygon", s(&concave)]).status.code(), Some(2));
}

#[test]
fn pentagon_study_rows() {
    let o = gbc(&["pentagon-study", "--apex", "1.5,1.05", "--grid", "64"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "apex,kind,max_grad_norm");
    assert_eq!(lines.len(), 5);
    let value = |k: usize| lines[k].rsplit(',').next().unwrap().parse::<f64>().unwrap();
    assert!(lines[1].starts_with("1.5,mvc,") && lines[2].starts_with("1.5,wachspress,"));
    // Comparable at apex 1.5, Wachspress much steeper at 1.05.
    assert!(value(2) / value(1) < 3.0);
    assert!(value(4) / value(3) > 3.0);
    assert!(!gbc(&["pentagon-study", "--apex", "0.9"]).status.success());
}

#[test]
fn pentagon_study_dump_writes_one_file_per_kind() {
    let dir = TempDir::new().unwrap();
    let o = gbc(&["pentagon-study", "--apex", "1.5", "--grid", "16", "--dump", s(dir.path())]);
    assert!(o.status.success());
    for kind in ["mvc", "wachspress"] {
        assert!(dir.path().join(format!("pentagon_1.5_{kind}.csv")).exists());
    }
}

#[test]
fn converge_table_layout() {
    let o = gbc(&["converge", "--levels", "2,4,8,16,32", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0][3].is_empty() && rows[0][5].is_empty());
    for r in &rows[1..] {
        assert!(!r[3].is_empty() && !r[5].is_empty());
    }
    let last = &rows[4];
    assert!((last[3].parse::<f64>().unwrap() - 2.0).abs() < 0.05);
    assert!((last[5].parse::<f64>().unwrap() - 1.0).abs() < 0.05);

    let md = stdout(&gbc(&["converge", "--levels", "4", "--format", "md"]));
    assert_eq!(md.lines().count(), 3);
    assert!(md.lines().nth(2).unwrap().ends_with("|  |"));
}

#[test]
fn converge_rejects_bad_levels_and_writes_mesh() {
    assert_eq!(gbc(&["converge", "--levels", "4,2"]).status.code(), Some(2));
    assert_eq!(gbc(&["converge", "--levels", "200"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let mesh = dir.path().join("mesh.json");
    let o = gbc(&["converge", "--levels", "1,2", "--field", "affine", "--mesh", s(&mesh), "--format", "json"]);
    assert!(o.status.success());
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&mesh).unwrap()).unwrap();
    assert_eq!(m["elements"].as_array().unwrap().len(), 4);
    assert_eq!(m["nodes"].as_array().unwrap().len(), 21);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r["levels"][1]["h1_error"].as_f64().unwrap() < 1e-9);
}

#[test]
fn properties_exit_codes_and_determinism() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    let args = |out: &Path| {
        vec!["properties", "--seed", "7", "--polygons", "3", "--samples", "200", "--out"]
            .into_iter()
            .map(String::from)
            .chain([out.to_str().unwrap().to_string()])
            .collect::<Vec<_>>()
    };
    let run = |out: &Path| {
        let v = args(out);
        gbc(&v.iter().map(String::as_str).collect::<Vec<_>>())
    };
    assert!(run(&a).status.success());
    assert!(run(&b).status.success());
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.contains("total violations: 0"));

    let o = gbc(&["properties", "--polygons", "2", "--samples", "100", "--tol", "1e-16"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stdout(&o).contains("total violations: 0"));
    assert_eq!(gbc(&["properties", "--polygons", "0"]).status.code(), Some(2));
}

#[test]
fn unknown_flags_are_rejected() {
    assert!(!gbc(&["converge", "--level", "2"]).status.success());
    assert!(!gbc(&["eval", "--polygon", "x.json", "--kind", "harmonic"]).status.success());
}
