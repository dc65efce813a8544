use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use exemplar_core::kernel::alpha_equivalent;
use exemplar_core::syntax::{load_scenario, parse_formula};
use serde_json::Value;

fn marketplace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/scenarios/marketplace.scn")
}

fn engine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exemplar-engine"))
        .args(args)
        .output()
        .expect("engine runs")
}

fn json(args: &[&str]) -> Value {
    let out = engine(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn marketplace_learns_honesty_and_answers_accurately() {
    let path = marketplace();
    let report = json(&["--json", "run", path.to_str().unwrap()]);
    let traits = report["traits"].as_array().unwrap();
    assert_eq!(traits.len(), 1);
    assert_eq!(traits[0]["learner"], "d");
    assert_eq!(traits[0]["exemplar"], "a");

    let sig = load_scenario(&path).unwrap().signature;
    let want = parse_formula(
        "(trait (and (believes d ?T:Moment (and (holds ?F:Fluent ?T:Moment) (> (nu (utter ?F:Fluent) ?T:Moment) 0)))
                     (happens (action d (utter ?F:Fluent)) ?T:Moment)) d)",
        &sig,
    )
    .unwrap();
    let got = parse_formula(traits[0]["formula"].as_str().unwrap(), &sig).unwrap();
    assert!(alpha_equivalent(&got, &want), "{got:?}");

    let actions = report["actions"].as_array().unwrap();
    assert_eq!(actions.len(), 1);
    assert_eq!(actions[0]["agent"], "d");
    assert_eq!(actions[0]["action"], "(utter (new u))");
    assert_eq!(actions[0]["accurate"], true);
}

#[test]
fn json_reports_are_deterministic() {
    let path = marketplace();
    let path = path.to_str().unwrap();
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("duration_ms");
        v
    };
    let first = strip(json(&["--json", "run", path]));
    let second = strip(json(&["--json", "run", "--jobs", "4", path]));
    assert_eq!(first, second);
}

#[test]
fn scenario_without_admiration_learns_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "quiet.scn",
        "(config (horizon 4)) (constant a b Agent) (constant e Event) (happens e 1)",
    );
    let report = json(&["--json", "run", p.to_str().unwrap()]);
    assert_eq!(report["traits"], Value::Array(vec![]));
    assert_eq!(report["admirations"], Value::Array(vec![]));
}

#[test]
fn malformed_scenario_exits_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "bad.scn", "(config (horizon 4)) (constant a Agent) (believes a 1");
    let out = engine(&["run", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.scn"));

    let missing = dir.path().join("missing.scn");
    assert_eq!(engine(&["parse", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(engine(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(engine(&["run"]).status.code(), Some(2));
}

#[test]
fn prove_reports_a_replayed_trace() {
    let path = marketplace();
    let v = json(&[
        "--json",
        "prove",
        path.to_str().unwrap(),
        "--goal",
        "(believes d 2 (holds (new x) 1))",
    ]);
    assert_eq!(v["verdict"], "proved");
    assert_eq!(v["replayed"], true);

    let v = json(&["--json", "prove", path.to_str().unwrap(), "--goal", "(holds (old x) 1)"]);
    assert_eq!(v["verdict"], "unknown");
}

#[test]
fn antiunify_uses_canonical_names() {
    let out = engine(&["antiunify", "(hungry jack)", "(hungry jill)"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("(hungry ?X1:Object)"));
}

#[test]
fn virtue_queries_answer_from_the_run() {
    let path = marketplace();
    let path = path.to_str().unwrap();
    let v = json(&["--json", "query-virtuous", path, "--agent", "a", "--n", "1"]);
    assert_eq!(v["virtuous"], true);
    let v = json(&["--json", "query-virtuous", path, "--agent", "a", "--n", "2"]);
    assert_eq!(v["virtuous"], false);
    assert_eq!(engine(&["query-virtuous", path, "--agent", "nobody"]).status.code(), Some(1));
}

#[test]
fn parse_output_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let out = engine(&["parse", marketplace().to_str().unwrap()]);
    assert!(out.status.success());
    let p = write(&dir, "again.scn", &String::from_utf8(out.stdout.clone()).unwrap());
    let again = engine(&["parse", p.to_str().unwrap()]);
    assert_eq!(again.stdout, out.stdout);
}
