mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::data;
use serde_json::Value;

fn zerocap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerocap")).args(args).env_remove("ZEROCAP_PRECISION").output().unwrap()
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

fn ok_json(args: &[&str]) -> Value {
    let out = zerocap(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn failure(args: &[&str]) -> (i32, Value) {
    let out = zerocap(args);
    let code = out.status.code().unwrap();
    let report = serde_json::from_slice(&out.stderr).unwrap_or(Value::Null);
    (code, report)
}

#[test]
fn classify_reports_the_pentagon_graph() {
    let v = ok_json(&["classify", "--channel", &path("typewriter.json")]);
    assert_eq!(v["edges"], 5);
    assert_eq!(v["inputs"], serde_json::json!(["a", "b", "c", "d", "e"]));
}

#[test]
fn capacity_reports_bounds_and_writes_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    let dimacs = dir.path().join("g.dimacs");
    let v = ok_json(&["capacity", "--channel", &path("typewriter.json"), "--dimacs", dimacs.to_str().unwrap()]);
    assert_eq!(v["lower"]["n"], 2);
    assert_eq!(v["lower"]["alpha"], "5");
    assert_eq!(v["upper"], 3);
    assert_eq!(v["exact"], "sqrt(5)");
    let text = std::fs::read_to_string(&dimacs).unwrap();
    assert!(text.lines().any(|l| l == "p edge 5 5"), "{text}");
}

#[test]
fn decide_outcomes_and_indicators() {
    let binary = path("noiseless2.json");
    for (plant, outcome, s, u) in [
        ("plant_3_2.json", "SOLVABLE", Value::from(1), Value::from(0)),
        ("plant_3.json", "UNSOLVABLE", Value::from(0), Value::from(1)),
        ("plant_2.json", "BOUNDARY", Value::from(0), Value::from(0)),
    ] {
        let v = ok_json(&["decide", "--plant", &path(plant), "--channel", &binary]);
        assert_eq!(v["outcome"], outcome, "{plant}");
        assert_eq!((v["indicator_s"].clone(), v["indicator_u"].clone()), (s, u), "{plant}");
    }
}

#[test]
fn written_verdicts_recheck() {
    let dir = tempfile::tempdir().unwrap();
    let verdict = dir.path().join("verdict.json");
    let pentagon = path("typewriter.json");
    let out = zerocap(&["decide", "--plant", &path("plant_11_5.json"), "--channel", &pentagon, "-o", verdict.to_str().unwrap()]);
    assert!(out.status.success());
    let v = ok_json(&["decide", "--check", verdict.to_str().unwrap(), "--channel", &pentagon]);
    assert_eq!(v["valid"], true);
    assert_eq!(v["outcome"], "SOLVABLE");

    let text = std::fs::read_to_string(&verdict).unwrap().replace("\"11/5\"", "\"5/2\"");
    std::fs::write(&verdict, text).unwrap();
    let (code, report) = failure(&["decide", "--check", verdict.to_str().unwrap(), "--channel", &pentagon]);
    assert_eq!(code, 3);
    assert_eq!(report["error"], "domain");
}

#[test]
fn precision_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_zerocap"))
        .args(["decide", "--plant", &path("plant_rotation.json"), "--channel", &path("bsc.json")])
        .env("ZEROCAP_PRECISION", "8")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["outcome"], "UNSOLVABLE");
}

#[test]
fn code_search_verbs() {
    let v = ok_json(&["find-code", "--plant", &path("plant_11_5.json"), "--channel", &path("typewriter.json")]);
    assert_eq!(v["certificate"]["block_length"], 2);
    assert_eq!(v["certificate"]["messages"], 5);
    assert_eq!(v["certificate"]["rate_bound"], "121/25");

    let v = ok_json(&["search-gamma", "--plant", &path("plant_3_2.json"), "--channel", &path("noiseless2.json")]);
    assert_eq!(v["gamma"], "566");

    let (code, report) = failure(&[
        "search-gamma",
        "--plant",
        &path("plant_3_2.json"),
        "--channel",
        &path("noiseless2.json"),
        "--budget",
        "100",
    ]);
    assert_eq!((code, report["error"].as_str()), (4, Some("budget")));

    let (code, _) =
        failure(&["find-code", "--plant", &path("plant_3.json"), "--channel", &path("noiseless2.json"), "--max-block", "2"]);
    assert_eq!(code, 4);
}

#[test]
fn bss_eval_values_and_errors() {
    let program = path("exp_n.sexp");
    let v = ok_json(&["bss-eval", "--program", &program, "--args", "3,-3/2"]);
    assert_eq!(v["value"], "-27/8");
    assert_eq!(failure(&["bss-eval", "--program", &program, "--args", "1"]).0, 3);
    assert_eq!(failure(&["bss-eval", "--program", &program, "--args", "1,x"]).0, 2);
}

#[test]
fn simulate_writes_a_report_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let v = ok_json(&["simulate", "--config", &path("sim_3_2.json"), "--trials", "2", "--csv", csv.to_str().unwrap()]);
    assert_eq!(v["trials"].as_array().unwrap().len(), 2);
    assert_eq!(v["fraction_below"], 1.0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("t,error,state_0,estimate_0,input,output"));
    assert_eq!(text.lines().count(), 2001);
}

#[test]
fn unreadable_inputs_exit_with_parse_errors() {
    let (code, report) = failure(&["classify", "--channel", "/nonexistent/channel.json"]);
    assert_eq!((code, report["error"].as_str()), (2, Some("parse")));
    let (code, _) = failure(&["classify", "--channel", &path("exp_n.sexp")]);
    assert_eq!(code, 2);
    assert!(!Path::new("/nonexistent/channel.json").exists());
}
