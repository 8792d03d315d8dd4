mod common;

use std::process::{Command, Output};

use common::fixture_path;
use surfres::surface_graph::{a_chain, is_isomorphic, SGraph};
use surfres::verifier::CheckReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surfres"))
        .args(args)
        .output()
        .unwrap()
}

fn path(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

#[test]
fn validate_bad_relation_fails_with_one_violation() {
    let out = run(&["validate", &path("bad_relation.json")]);
    assert!(!out.status.success());
    let r: CheckReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.failures().count(), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("relation"));
}

#[test]
fn validate_cusp_passes() {
    let out = run(&["validate", "--input", &path("cusp.json")]);
    assert!(out.status.success());
}

#[test]
fn build_is_byte_identical_across_runs() {
    let a = run(&["build", &path("cusp.json")]);
    let b = run(&["build", &path("cusp.json")]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let golden = std::fs::read(fixture_path("golden/cusp_complex.json")).unwrap();
    assert_eq!(a.stdout, golden);
}

#[test]
fn minimal_surface_graph_of_cusp_is_a2() {
    let out = run(&["surface-graph", &path("cusp.json"), "--minimal"]);
    assert!(out.status.success());
    let g: SGraph = serde_json::from_slice(&out.stdout).unwrap();
    assert!(is_isomorphic(&g, &a_chain(2)));
}

#[test]
fn dot_outputs() {
    let out = run(&["render", &path("cusp.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph complex {"));
    assert!(text.contains("compact_tower_level/X_0 (6)"));
    let out = run(&["surface-graph", &path("node.json"), "--format", "dot"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[label=\"[0] -2\"]"));
    let out = run(&["normalize", &path("cusp.json"), "--format", "dot"]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("graph curves {"));
}

#[test]
fn order_override_is_validated() {
    let ok = run(&["build", &path("cusp.json"), "--order", "A2,A1,A3"]);
    assert!(ok.status.success());
    let bad = run(&["build", &path("cusp.json"), "--order", "A3,A1,A2"]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("order"));
}

#[test]
fn refinement_flags_and_output_file() {
    let dir = std::env::temp_dir().join(format!("surfres-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("refined.json");
    let out = run(&[
        "normalize",
        &path("cusp.json"),
        "--seed",
        "7",
        "--steps",
        "6",
        "--output",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&file).unwrap();
    let expected = std::fs::read(fixture_path("cusp_refined_seed7_steps6.json")).unwrap();
    assert_eq!(written, expected);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_exit_codes() {
    assert!(run(&["check", &path("node.json")]).status.success());
    assert!(!run(&["check", &path("bad_relation.json")]).status.success());
}

#[test]
fn parse_errors_report_position() {
    let dir = std::env::temp_dir().join(format!("surfres-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("broken.json");
    std::fs::write(
        &file,
        "{\n  \"name\": \"x\",\n  \"vertices\": [{\"id\": 1}]\n}\n",
    )
    .unwrap();
    let out = run(&["validate", file.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    std::fs::remove_dir_all(&dir).unwrap();
}
