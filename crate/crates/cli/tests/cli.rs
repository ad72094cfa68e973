use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn emk(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_emk"));
    c.args(args);
    for (k, v) in envs {
        c.env(k, v);
    }
    c.output().expect("emk runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn fixtures() -> (TempDir, PathBuf, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "tri.json", r#"{"dim":2,"vertices":[[0,0],[1,0],[0,1]]}"#);
    let tri2 = write(
        dir.path(),
        "tri2.json",
        r#"{"dim":2,"inequalities":[{"a":[-1,0],"b":0},{"a":[0,-1],"b":0},{"a":[3,2],"b":6}]}"#,
    );
    (dir, tri, tri2)
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn expand_reports_the_triangle_constants() {
    let (_d, tri, _) = fixtures();
    let v = json(&emk(&["expand", "--polyhedron", s(&tri), "--order", "2"], &[]));
    let terms = v["terms"].as_array().unwrap();
    let mut vertex: Vec<&str> = terms
        .iter()
        .filter(|t| t["face"]["dim"] == 0 && t["k"] == 2)
        .map(|t| t["coefficient"].as_str().unwrap())
        .collect();
    vertex.sort();
    assert_eq!(vertex, ["1/4", "3/8", "3/8"]);
    let diag = terms
        .iter()
        .find(|t| t["k"] == 2 && t["normal_form"]["direction"] == serde_json::json!(["-1/2", "-1/2"]))
        .expect("diagonal edge term");
    assert_eq!(diag["normal_form"]["coefficient"], "-1/12");
}

#[test]
fn expand_in_rational_mode_lists_each_t() {
    let (_d, tri, _) = fixtures();
    let v = json(&emk(&["expand", "--polyhedron", s(&tri), "--mode", "rational-t", "--t", "3/2,7/3"], &[]));
    let blocks = v["terms_at"].as_array().unwrap();
    assert_eq!(blocks.iter().map(|b| b["t"].as_str().unwrap()).collect::<Vec<_>>(), ["3/2", "7/3"]);
    let diag = blocks[1]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["k"] == 1 && t["normal_form"]["direction"] == serde_json::json!(["-1/2", "-1/2"]))
        .unwrap();
    assert_eq!(diag["normal_form"]["coefficient"], "1/6");
}

#[test]
fn ehrhart_of_the_second_triangle() {
    let (_d, _, tri2) = fixtures();
    let v = json(&emk(&["ehrhart", "--polyhedron", s(&tri2), "--t", "1,2,3,4,5,6"], &[]));
    assert_eq!(v["coefficients"], serde_json::json!(["3", "3", "1"]));
    let counts: Vec<u64> = v["checks"].as_array().unwrap().iter().map(|c| c["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, [7, 19, 37, 61, 91, 127]);
}

#[test]
fn verify_matches_and_exits_zero() {
    let (_d, tri, _) = fixtures();
    let out = emk(&["verify", "--polyhedron", s(&tri), "--h", "x1^2*x2 - 3*x2 + 1", "--t", "1,2,3", "--format", "table"], &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("exact match").count(), 3, "{text}");
}

#[test]
fn verify_reports_a_truncated_expansion_with_exit_three() {
    let (_d, tri, _) = fixtures();
    let out = emk(&["verify", "--polyhedron", s(&tri), "--h", "x1*x2", "--order", "2", "--t", "1,2"], &[]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_match"], false);
}

#[test]
fn verify_reads_back_a_saved_expansion() {
    let (d, tri, _) = fixtures();
    let saved = d.path().join("expansion.json");
    let out = emk(&["expand", "--polyhedron", s(&tri), "--order", "4", "--output", s(&saved)], &[]);
    assert!(out.status.success());
    let v = json(&emk(
        &["verify", "--polyhedron", s(&tri), "--expansion", s(&saved), "--h", "x1^2 + x2", "--t", "1,4"],
        &[],
    ));
    assert_eq!(v["all_match"], true);

    let saved_q = d.path().join("expansion_q.json");
    let out = emk(
        &["expand", "--polyhedron", s(&tri), "--order", "4", "--mode", "rational-t", "--t", "5/2", "--output", s(&saved_q)],
        &[],
    );
    assert!(out.status.success());
    let v = json(&emk(
        &["verify", "--polyhedron", s(&tri), "--expansion", s(&saved_q), "--h", "x1*x2", "--t", "5/2"],
        &[],
    ));
    assert_eq!(v["all_match"], true);
}

#[test]
fn local_eml_on_the_square_cone() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "sq.json", r#"{"dim":3,"vertices":[[0,0,0]],"rays":[[1,0,1],[0,1,1],[-1,0,1],[0,-1,1]]}"#);
    let v = json(&emk(&["local-eml", "--polyhedron", s(&sq), "--order", "1"], &[]));
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 5);
    assert!(comps.iter().all(|c| c["matches"] == true));
}

#[test]
fn validation_errors_exit_two() {
    let (d, tri, _) = fixtures();
    let bad = write(d.path(), "bad.json", "{\"dim\": 2, \"vertices\": [[0, 0], [1]]");
    assert_eq!(emk(&["expand", "--polyhedron", s(&bad)], &[]).status.code(), Some(2));
    assert_eq!(emk(&["expand", "--polyhedron", s(&tri), "--order", "-1"], &[]).status.code(), Some(2));
    let q = write(d.path(), "q.json", r#"{"dim":2,"matrix":[[1,2],[2,1]]}"#);
    assert_eq!(emk(&["expand", "--polyhedron", s(&tri), "--scalar-product", s(&q)], &[]).status.code(), Some(2));
    let rational = write(d.path(), "half.json", r#"{"dim":1,"vertices":[["1/2"],[2]]}"#);
    assert_eq!(emk(&["expand", "--polyhedron", s(&rational)], &[]).status.code(), Some(2));
    assert_eq!(emk(&["expand", "--polyhedron", s(&rational), "--mode", "rational-t", "--t", "1"], &[]).status.code(), Some(0));
    assert_eq!(emk(&["expand", "--polyhedron", s(&tri), "--mode", "rational-t", "--t", "-1"], &[]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let (_d, _, tri2) = fixtures();
    let args = ["mu", "--polyhedron", s(&tri2), "--order", "3"];
    let a = emk(&args, &[("EMK_THREADS", "1")]);
    let b = emk(&args, &[("EMK_THREADS", "4")]);
    let c = emk(&args, &[]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}
