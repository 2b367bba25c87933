use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use qslice::io::load_quiver;
use qslice::iso::find_isomorphism;

const S1: &str = "(1,0),(2,1),(3,2),(5,0),(6,1),(4,2)";

fn qslice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qslice"))
        .args(args)
        .env_remove("QSLICE_BOUNDS")
        .output()
        .expect("binary runs")
}

fn qslice_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qslice"))
        .args(args)
        .env_remove("QSLICE_BOUNDS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

#[test]
fn classify_auslander_is_finite_of_index_two() {
    let o = qslice(&["classify", &fixture("a4-auslander.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Finite, Coxeter index 2");
}

#[test]
fn classify_json_reports_the_class() {
    let o = qslice(&["--json", "classify", "fixture:kronecker"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["class"], "tame");
}

#[test]
fn dual_of_kronecker_has_no_relations() {
    let o = qslice(&["dual", &fixture("kronecker.json")]);
    assert_eq!(o.status.code(), Some(0));
    let q = load_quiver(&stdout(&o)).unwrap();
    assert_eq!(q.arrows().len(), 2);
    assert!(q.relations().is_empty());
}

#[test]
fn companion_twice_is_isomorphic_to_the_input() {
    let first = qslice(&["companion", "fixture:a4-auslander"]);
    assert_eq!(first.status.code(), Some(0));
    let second = qslice_stdin(&["companion", "-"], &first.stdout);
    assert_eq!(second.status.code(), Some(0), "{}", String::from_utf8_lossy(&second.stderr));
    let back = load_quiver(&stdout(&second)).unwrap();
    let original = load_quiver(&std::fs::read_to_string(fixture("a4-auslander.json")).unwrap()).unwrap();
    assert!(find_isomorphism(&back, &original).unwrap().is_some());
}

#[test]
fn mutation_at_a_source() {
    let o = qslice(&["mutate", "fixture:a4-auslander", "--slice", S1, "--vertex", "(5,0)", "--dir", "plus"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(1,0),(2,1),(6,1),(3,2),(4,2),(5,3)");
}

#[test]
fn hammock_from_the_corner() {
    let o = qslice(&["hammock", "fixture:a4-auslander", "--vertex", "(1,0)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with(": (1,0) (2,1) (3,2)\n"));
}

#[test]
fn double_slice_has_ten_vertices() {
    let o = qslice(&["--json", "double-slice", "fixture:a4-auslander", "--slice", S1]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 10);
}

#[test]
fn exit_codes() {
    assert_eq!(qslice(&["slice-check", "fixture:a4-auslander", "--slice", S1]).status.code(), Some(0));
    let refuted = qslice(&["slice-check", "fixture:a4-auslander", "--slice", "(1,0),(2,1)"]);
    assert_eq!(refuted.status.code(), Some(2));
    assert_eq!(qslice(&["classify", "no/such/file.json"]).status.code(), Some(1));
    assert_eq!(qslice(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qslice(&["--help"]).status.code(), Some(0));
}

#[test]
fn schema_errors_carry_a_pointer() {
    let bad = br#"{"schema_version":1,"vertices":["1"],"arrows":[{"id":"a","from":"1","to":"9"}]}"#;
    let o = qslice_stdin(&["classify", "-"], bad);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/arrows/0/to"));
}

#[test]
fn fixture_files_round_trip() {
    for name in ["a4-auslander.json", "kronecker.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let q = load_quiver(&text).unwrap();
        let again = load_quiver(&qslice::io::quiver_json(&q, None)).unwrap();
        assert_eq!(qslice::io::quiver_json(&again, None), qslice::io::quiver_json(&q, None));
    }
    let file = load_quiver(&std::fs::read_to_string(fixture("a4-auslander.json")).unwrap()).unwrap();
    let named = qslice::fixtures::a4_auslander_gamma();
    assert!(find_isomorphism(&file, &named).unwrap().is_some());
}

#[test]
fn out_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("qslice-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dot.gv");
    let o = qslice(&["dot", "fixture:a3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("digraph"));
    std::fs::remove_dir_all(&dir).unwrap();
}
