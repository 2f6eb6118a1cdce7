use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use linkcone::format::{pretty, prop3_map_json};
use linkcone::link::ray15_link;
use linkcone::prop3::{build_trit_partition, derive_rhs_assignment};
use linkcone::LinearInequality;
use serde_json::Value;
use tempfile::TempDir;

const EQ4: &str = "S(AB)+S(DE)+S(ACD)+2 S(ACE)+S(BCD)+S(ABDE) >= S(AC)+S(AE)+S(BD)+2 S(ABCD)+S(ACDE)";

fn linkcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linkcone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
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
fn entropy_of_ray15() {
    let o = linkcone(&["entropy", "--builtin", "ray15", "--subsystem", "AB"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn entropy_vector_is_labelled() {
    let o = linkcone(&["entropy-vector", "--builtin", "ray15"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 31);
    assert_eq!(v[0]["subsystem"], "A");
}

#[test]
fn malformed_model_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = file(&dir, "bad.json", "{\"kind\": \"graph\"");
    let o = linkcone(&["entropy-vector", "--model", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let o = linkcone(&["entropy-vector", "--model", "/nonexistent/model.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_4() {
    assert_eq!(linkcone(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(linkcone(&["entropy", "--subsystem", "A"]).status.code(), Some(4));
    assert_eq!(linkcone(&["--help"]).status.code(), Some(0));
}

#[test]
fn eq4_is_violated_on_ray15() {
    let dir = TempDir::new().unwrap();
    let ineq = file(&dir, "eq4.txt", EQ4);
    let report = dir.path().join("report.json");
    let o = linkcone(&["check-ineq", "--builtin", "ray15", "--ineq", s(&ineq), "--report", s(&report)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "violated 11 < 12\n");
    let r: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["exit_code"], 1);
    assert_eq!(r["results"]["holds"], false);
    assert_eq!(r["model_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn certificate_method_needs_a_map() {
    let dir = TempDir::new().unwrap();
    let ineq = file(&dir, "eq4.txt", EQ4);
    let o = linkcone(&["check-ineq", "--builtin", "ray15", "--ineq", s(&ineq), "--method", "prop3"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn certificate_for_subadditivity_passes() {
    let dir = TempDir::new().unwrap();
    let text = "S(A) + S(C) >= S(AC)";
    let ineq = file(&dir, "sa.txt", text);
    let m = ray15_link();
    let parsed = LinearInequality::parse(text, 5).unwrap();
    let p = build_trit_partition(&m, &parsed).unwrap();
    let zeros: BTreeMap<_, _> = p
        .cells()
        .keys()
        .filter(|x| x.has_zero())
        .map(|x| (x.clone(), BTreeSet::from([0])))
        .collect();
    let f = derive_rhs_assignment(&m, &parsed, &p, &zeros).unwrap();
    let map = file(&dir, "map.json", &pretty(&prop3_map_json(&f)));
    let indicator = dir.path().join("indicator.json");
    let o = linkcone(&[
        "check-ineq", "--builtin", "ray15", "--ineq", s(&ineq), "--method", "prop3",
        "--map", s(&map), "--exhaustive", "--indicator", s(&indicator),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("certificate passed"));
    let t: Value = serde_json::from_str(&fs::read_to_string(&indicator).unwrap()).unwrap();
    assert!(t["entries"].is_array());

    // Sending every cell to +1 leaves no cut for the RHS term.
    let plus: BTreeMap<String, Value> = p.cells().keys().map(|x| (x.to_string(), "1".into())).collect();
    let map = file(&dir, "plus.json", &serde_json::to_string(&plus).unwrap());
    let o = linkcone(&[
        "check-ineq", "--builtin", "ray15", "--ineq", s(&ineq), "--method", "prop3", "--map", s(&map),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("invalid"));
}

#[test]
fn certificate_rejects_graph_models() {
    let dir = TempDir::new().unwrap();
    let g = file(
        &dir,
        "g.json",
        r#"{"kind":"graph","vertices":["a","b","c"],"external":{"A":"a","B":"b","C":"c"},"edges":[["a","b",1]]}"#,
    );
    let ineq = file(&dir, "sa.txt", "S(A)+S(B) >= S(AB)");
    let map = file(&dir, "map.json", "{}");
    let o = linkcone(&["check-ineq", "--model", s(&g), "--ineq", s(&ineq), "--method", "prop3", "--map", s(&map)]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn contraction_for_subadditivity_is_written() {
    let dir = TempDir::new().unwrap();
    let ineq = file(&dir, "sa.txt", "S(A)+S(B) >= S(AB)");
    let out = dir.path().join("f.json");
    let o = linkcone(&["find-contraction", "--ineq", s(&ineq), "--mode", "graph", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let f: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(f["00"], "0");
    assert_eq!(f["11"], "0");
    assert_eq!(f["10"], "1");
}

#[test]
fn tiny_budget_exits_5() {
    let dir = TempDir::new().unwrap();
    let ineq = file(&dir, "eq4.txt", EQ4);
    let o = linkcone(&["find-contraction", "--ineq", s(&ineq), "--budget", "3"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn bad_mode_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let ineq = file(&dir, "sa.txt", "S(A)+S(B) >= S(AB)");
    let o = linkcone(&["find-contraction", "--ineq", s(&ineq), "--mode", "hypergraph:x"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn generate_is_deterministic() {
    let args = ["generate", "--kind", "link", "--parties", "3", "--loops", "8", "--atoms", "5", "--seed", "7"];
    let a = linkcone(&args);
    let b = linkcone(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = linkcone(&["generate", "--kind", "link", "--parties", "3", "--loops", "8", "--atoms", "5", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn unlinked_model_has_zero_entropy() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("m.json");
    let o = linkcone(&["generate", "--atoms", "0", "--seed", "3", "--out", s(&path)]);
    assert_eq!(o.status.code(), Some(0));
    let o = linkcone(&["entropy-vector", "--model", s(&path)]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|e| e["entropy"] == "0"));
}

#[test]
fn generated_files_round_trip() {
    let dir = TempDir::new().unwrap();
    for kind in ["link", "hypergraph", "graph"] {
        let first = dir.path().join(format!("{kind}1.json"));
        linkcone(&["generate", "--kind", kind, "--seed", "11", "--out", s(&first)]);
        let second = dir.path().join(format!("{kind}2.json"));
        let o = linkcone(&["convert", "--model", s(&first), "--out", s(&second)]);
        if kind == "link" {
            assert_eq!(o.status.code(), Some(3));
            continue;
        }
        assert_eq!(o.status.code(), Some(0), "{kind}");
        assert!(stdout(&o).contains("vectors equal: true"));
        let a = linkcone(&["entropy-vector", "--model", s(&first)]);
        let b = linkcone(&["entropy-vector", "--model", s(&second)]);
        assert_eq!(a.stdout, b.stdout);
    }
    let path = dir.path().join("ray15.json");
    let o = linkcone(&["generate", "--builtin", "ray15", "--out", s(&path)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let o = linkcone(&["entropy", "--model", s(&path), "--subsystem", "AB"]);
    assert_eq!(stdout(&o), "1\n");
    assert!(text.ends_with('\n'));
}

#[test]
fn convert_keeps_the_vector() {
    let dir = TempDir::new().unwrap();
    let square = file(
        &dir,
        "square.json",
        r#"{"kind":"graph","vertices":["a","b","c","d"],"external":{"A":"a","B":"b","C":"c","D":"d"},
           "edges":[["a","b",1],["b","c",1],["c","d",1],["d","a",1]]}"#,
    );
    let o = linkcone(&["convert", "--model", s(&square)]);
    assert_eq!(o.status.code(), Some(0));
    let link: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(link["kind"], "link");
    let zero = file(
        &dir,
        "zero.json",
        r#"{"kind":"hypergraph","vertices":["a","b","m"],"external":{"A":"a","B":"b"},
           "hyperedges":[{"members":["a","m"],"weight":0},{"members":["m","b"],"weight":2}]}"#,
    );
    let out = dir.path().join("zero_link.json");
    let o = linkcone(&["convert", "--model", s(&zero), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("vectors equal: true"));
}
