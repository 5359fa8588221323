use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn catmt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catmt")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = catmt(&all);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), doc)
}

fn witness(doc: &Value, i: usize) -> &Value {
    &doc["checks"][i]["witness"]
}

#[test]
fn effective_suite_passes() {
    let (code, doc) = report(&["indep", "suite", "--category", "set-mono", "--predicate", "effective", "--bound", "4"]);
    assert_eq!(code, 0);
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 6);
    assert!(checks.iter().all(|c| c["verdict"] == "pass" && c["exhaustive"] == true));
}

#[test]
fn graph_rivals_disagree() {
    let (code, doc) = report(&["indep", "canonicity", "--category", "graph-full", "--bound", "4"]);
    assert_eq!(code, 1);
    let last = doc["checks"].as_array().unwrap().last().unwrap();
    assert_eq!(last["verdict"], "fail");
    assert_eq!(last["witness"]["square"]["apex"]["edges"], serde_json::json!([[0, 1]]));
}

#[test]
fn zorn_reaches_the_top_of_a_chain() {
    let (code, doc) = report(&["exhaust", "run", "--demo", "zorn", "--poset", &fixture("chain3.json")]);
    assert_eq!(code, 0);
    assert_eq!(witness(&doc, 0)["terminal"], "2");
}

#[test]
fn order_property_on_a_linear_order() {
    let (code, doc) = report(&["fo", "order-property", "--structure", &fixture("lin5.json"), "--formula", "lt(x,y)", "--length", "5"]);
    assert_eq!(code, 0);
    assert_eq!(witness(&doc, 0)["indices"], serde_json::json!([0, 1, 2, 3, 4]));
    let (code, _) = report(&["fo", "order-property", "--structure", &fixture("lin5.json"), "--formula", "lt(x,y)", "--length", "6"]);
    assert_eq!(code, 1);
}

#[test]
fn type_counts() {
    let (code, doc) = report(&["fo", "types", "--structure", &fixture("eq6.json"), "--base", "0,1,2", "--arity", "1"]);
    assert_eq!(code, 0);
    assert_eq!(witness(&doc, 0)["count"], 4);
    let (_, doc) = report(&["amalg", "types", "--category", "set-mono", "--base-size", "2", "--bound", "3"]);
    assert_eq!(witness(&doc, 0)["classes"], 3);
}

#[test]
fn remaining_subcommands_run() {
    let runs: [&[&str]; 8] = [
        &["amalg", "check", "--category", "set-mono", "--base-size", "1", "--bound", "3"],
        &["amalg", "universal", "--category", "set-mono", "--base-size", "1", "--steps", "2"],
        &["exhaust", "club", "--length", "30", "--seed", "3"],
        &["exhaust", "run", "--demo", "generic", "--bound", "5"],
        &["fo", "independent", "--structure", &fixture("eq6.json"), "--tuple", "5", "--base", "0,1,2,3", "--with", "4", "--s", "2"],
        &["fo", "indiscernibles", "--structure", &fixture("lin5.json"), "--formula", "lt(x,y)", "--length", "5", "--sequence", "0;1;2;3;4"],
        &["fo", "axiomatize", "--space", "graphs", "--family", "triangle-free", "--bound", "3", "--cap", "4"],
        &["cat", "embed", "--poset", &fixture("chain3.json")],
    ];
    for args in runs {
        let (code, doc) = report(args);
        assert_eq!(code, 0, "{args:?}: {doc}");
    }
    let f = fixture("filtration.json");
    let (code, doc) = report(&["exhaust", "club", "--filtration", &f]);
    assert_eq!(code, 0);
    assert_eq!(witness(&doc, 0)["oracle"], serde_json::json!([2]));
    let (code, _) = report(&["exhaust", "run", "--demo", "filtration", "--filtration", &f]);
    assert_eq!(code, 0);
    let (code, _) = report(&["exhaust", "run", "--demo", "universal-extension", "--base-size", "1", "--steps", "2"]);
    assert_eq!(code, 0);
}

#[test]
fn failing_checks_exit_with_one() {
    let (code, _) = report(&["fo", "independent", "--structure", &fixture("eq6.json"), "--tuple", "5", "--base", "0,1,2,3", "--with", "4", "--s", "5"]);
    assert_eq!(code, 1);
    let (code, doc) = report(&["cat", "embed", "--category", &fixture("parallel.json")]);
    assert_eq!(code, 0, "{doc}");
}

#[test]
fn reports_are_deterministic() {
    let args = ["exhaust", "club", "--length", "40", "--seed", "11"];
    let (_, mut a) = report(&args);
    let (_, mut b) = report(&args);
    a["elapsed_ms"] = Value::Null;
    b["elapsed_ms"] = Value::Null;
    assert_eq!(a, b);
    assert_eq!(a["seed"], 11);
    assert_eq!(a["command"], "catmt exhaust club --length 40 --seed 11 --json");
}

#[test]
fn out_file_holds_the_report() {
    let path = std::env::temp_dir().join(format!("catmt-report-{}.json", std::process::id()));
    let out = catmt(&["fo", "types", "--structure", &fixture("eq6.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["checks"][0]["witness"]["count"], 1);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn usage_errors_exit_with_two() {
    let out = catmt(&["amalg", "typo"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    let out = catmt(&["indep", "suite", "--category", "set-mon", "--predicate", "effective"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("did you mean `set-mono`"));
    let out = catmt(&["indep", "suite", "--category", "set-mono", "--predicate", "efective"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("did you mean `effective`"));
    let out = catmt(&["fo", "order-property", "--structure", &fixture("lin5.json"), "--formula", "lt(x,", "--length", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column"));
}

#[test]
fn malformed_json_reports_its_position() {
    let path = std::env::temp_dir().join(format!("catmt-bad-{}.json", std::process::id()));
    std::fs::write(&path, "{\"universe\": 3,\n \"relations\": {\"lt\": }}").unwrap();
    let out = catmt(&["fo", "types", "--structure", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("column"), "{err}");
}
