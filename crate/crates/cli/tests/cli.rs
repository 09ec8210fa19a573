use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn symgraph(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symgraph"))
        .args(args)
        .current_dir(dir)
        .env("SYMGRAPH_ARTIFACT_DIR", dir.join("artifacts"))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn enumerate_lists_one_graph_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = symgraph(dir.path(), &["enumerate", "--d", "4"]);
    assert!(o.status.success());
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 23);

    let csv = symgraph(dir.path(), &["--csv", "enumerate", "--d", "2"]);
    assert!(csv.status.success());
    assert_eq!(stdout(&csv).lines().count(), 4);
}

#[test]
fn discriminant_artifact_feeds_the_cone() {
    let dir = tempfile::tempdir().unwrap();
    let disc = symgraph(dir.path(), &["disc", "--n", "3", "--k", "0"]);
    assert!(disc.status.success(), "{}", String::from_utf8_lossy(&disc.stderr));
    assert!(dir.path().join("artifacts/disc_n3_k0.json").exists());
    let cone = symgraph(dir.path(), &["cone", "--d", "6", "--n", "3"]);
    assert!(cone.status.success(), "{}", String::from_utf8_lossy(&cone.stderr));
    assert!(stdout(&cone).contains("\"feasible\":true"));
}

#[test]
fn coefficient_agrees_with_colorings() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", r#"{"n":2,"edges":[[1,2,2]]}"#);
    let o = symgraph(dir.path(), &["coeff", &g, "--alpha", "1,1,0", "--n", "3"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["expansion"], "-4/1");
    assert_eq!(v["coloring"], v["expansion"]);
}

#[test]
fn errors_are_json_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "loop.json", r#"{"n":2,"edges":[[1,1,1]]}"#);
    let o = symgraph(dir.path(), &["symgm", &g, "--n", "3"]);
    assert!(!o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(v["error"].is_string());
    assert!(v["message"].is_string());
}

#[test]
fn sos_find_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", r#"{"n":2,"edges":[[1,2,2]]}"#);
    let t = symgraph(dir.path(), &["symgm", &g, "--n", "4", "--out", "t.json"]);
    assert!(t.status.success());
    let f = symgraph(dir.path(), &["sos", "find", "--target", "t.json", "--vars", "2", "--out", "c.json"]);
    assert!(f.status.success(), "{}", String::from_utf8_lossy(&f.stderr));
    let v = symgraph(dir.path(), &["sos", "verify", "--target", "t.json", "--cert", "c.json"]);
    assert!(v.status.success());
    assert!(stdout(&v).contains("\"valid\":true"));

    let p = write(dir.path(), "p.json", r#"{"n":3,"edges":[[1,2,1],[2,3,1]]}"#);
    assert!(symgraph(dir.path(), &["symgm", &p, "--n", "4", "--out", "neg.json"]).status.success());
    let bad = symgraph(dir.path(), &["sos", "verify", "--target", "neg.json", "--cert", "c.json"]);
    assert!(!bad.status.success());
}

#[test]
fn classification_matches_golden_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = symgraph(dir.path(), &["classify", "--d", "4"]);
    let b = symgraph(dir.path(), &["--threads", "1", "classify", "--d", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let golden = include_str!("../../core/tests/golden/classify_d4.json");
    assert_eq!(stdout(&a), golden);

    let csv = symgraph(dir.path(), &["--csv", "classify", "--d", "4"]);
    assert!(csv.status.success());
    assert!(stdout(&csv).lines().count() > 1);
}
