//! End-to-end runs of the `stubmatch` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stubmatch"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn match_example_has_small_leftover_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.csv");
    let p = dir.path().join("p.csv");
    let out = ok(&["match", "--dim", "2", "--side", "30", "--mu", "2", "--seed", "7", "--output", path_str(&m)]);
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(summary["leftover_fraction"].as_f64().unwrap() < 0.05);
    ok(&["sample", "--dim", "2", "--side", "30", "--mu", "2", "--seed", "7", "--output", path_str(&p)]);
    let v = run(&["verify", "--input", path_str(&p), "--matching", path_str(&m)]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn sample_then_match_equals_internal_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let (p, a, b) = (dir.path().join("p.csv"), dir.path().join("a.csv"), dir.path().join("b.csv"));
    let flags = ["--dim", "1", "--side", "50", "--mu", "1:0.5,3:0.5", "--seed", "3"];
    let mut s = vec!["sample"];
    s.extend(flags);
    s.extend(["--output", path_str(&p)]);
    ok(&s);
    ok(&["match", "--input", path_str(&p), "--output", path_str(&a)]);
    let mut m = vec!["match"];
    m.extend(flags);
    m.extend(["--output", path_str(&b)]);
    ok(&m);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn corrupted_matching_fails_verification() {
    let v = run(&[
        "verify",
        "--input",
        path_str(&fixture("small_points.csv")),
        "--matching",
        path_str(&fixture("small_matching_corrupted.csv")),
    ]);
    assert_eq!(v.status.code(), Some(1));
    let good = run(&[
        "verify",
        "--input",
        path_str(&fixture("small_points.csv")),
        "--matching",
        path_str(&fixture("small_matching.csv")),
    ]);
    assert_eq!(good.status.code(), Some(0));
}

#[test]
fn render_matches_golden_file() {
    let out = ok(&[
        "render",
        "--input",
        path_str(&fixture("small_points.csv")),
        "--matching",
        path_str(&fixture("small_matching.csv")),
    ]);
    let golden = std::fs::read_to_string(fixture("small_golden.svg")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn sweep_writes_one_row_per_cell() {
    let out = ok(&["sweep", "--mu", "1:0.05,2:0.95", "--dim", "2", "--sides", "10,20,30", "--seeds", "20"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(stubmatch::io::SWEEP_HEADER));
    assert_eq!(lines.count(), 60);
    let json = ok(&["sweep", "--mu", "2", "--sides", "10", "--seeds", "3", "--format", "json"]);
    let rows: Vec<serde_json::Value> =
        String::from_utf8(json.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0]["largest_fraction"].is_number());
}

#[test]
fn schemes_write_matchings_and_types() {
    let dir = tempfile::tempdir().unwrap();
    let types = dir.path().join("t.csv");
    let m = dir.path().join("m.csv");
    ok(&["scheme", "--scheme", "finite", "--mu", "1:0.5,3:0.5", "--side", "12", "--types", path_str(&types), "--output", path_str(&m)]);
    let t = std::fs::read_to_string(&types).unwrap();
    assert!(t.starts_with("index,degree,type\n"));
    let out = run(&["scheme", "--scheme", "path", "--mu", "2", "--side", "10", "--output", path_str(&m)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("notice"));
    let refused = run(&["scheme", "--scheme", "connect", "--mu", "1:0.6,2:0.4", "--side", "10", "--output", path_str(&m)]);
    assert_eq!(refused.status.code(), Some(4));
}

#[test]
fn stats_reports_components_edges_and_cubes() {
    let out = ok(&[
        "stats",
        "--input",
        path_str(&fixture("small_points.csv")),
        "--matching",
        path_str(&fixture("small_matching.csv")),
        "--cube-side",
        "2",
        "--cube-max",
        "8",
        "--transport",
        "path-endpoint",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["components"]["n_points"], 64);
    assert_eq!(v["cubes"]["m_reach"], 3);
    assert_eq!(v["transport"]["total_sent"], v["transport"]["total_received"]);
    let csv = ok(&[
        "stats",
        "--input",
        path_str(&fixture("small_points.csv")),
        "--matching",
        path_str(&fixture("small_matching.csv")),
        "--format",
        "csv",
    ]);
    assert!(String::from_utf8(csv.stdout).unwrap().contains("components.largest_fraction,"));
    let bad = run(&[
        "stats",
        "--input",
        path_str(&fixture("small_points.csv")),
        "--matching",
        path_str(&fixture("small_matching.csv")),
        "--transport",
        "nope",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn exit_codes_for_usage_and_io() {
    assert_eq!(run(&["match", "--mu", "1:0.5,2:0.6"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--input", "/no/such/file", "--matching", "/no/such/file"]).status.code(), Some(3));
}
