use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn spectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectra"))
        .args(args)
        .env_remove("SPECTRA_DEFAULT_PRECISION")
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = spectra(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    validate(args[0], &doc);
    doc
}

fn validate(command: &str, doc: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("schemas/{command}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let v = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{command}: {errors:?}");
}

#[test]
fn classify_examples() {
    let tag = |args: &[&str]| json_of(args)["result"]["class"]["tag"].as_str().unwrap().to_string();
    assert_eq!(tag(&["classify", "--poly", "-1,-1,0,1", "--root-index", "0"]), "Pisot");
    assert_eq!(tag(&["classify", "--poly", "-2,0,1", "--root-index", "0"]), "NotPisot-AlgebraicInteger");
    assert_eq!(tag(&["classify", "--poly", "-2,1"]), "PisotInteger");
}

#[test]
fn classify_with_verdict() {
    let d = json_of(&["classify", "--poly", "-3,1", "--m", "2"]);
    assert_eq!(d["result"]["verdict"]["verdict"]["verdict"], "discrete");
    assert_eq!(d["result"]["verdict"]["verdict"]["reason"], "large_base");
}

#[test]
fn minpos_golden_closes() {
    let d = json_of(&["minpos", "--poly", "-1,-1,1", "--root-index", "0", "--m", "1"]);
    let r = &d["result"];
    assert_eq!(r["verdict"]["verdict"], "positive_certified");
    assert_eq!(r["verdict"]["value"]["vec"], serde_json::json!([-1, 1]));
    assert!(r["bfs"]["closed"].as_bool().unwrap());
}

#[test]
fn aq_radii_decrease() {
    let d = json_of(&["aq", "--base", "1.35", "--degrees", "7,14", "--bound", "2"]);
    assert_eq!(d["result"]["decreasing"], true);
}

#[test]
fn spectrum_and_gaps() {
    let d = json_of(&["spectrum", "--poly", "-1,-1,1", "--bound", "3"]);
    let pts = d["result"]["points"].as_array().unwrap();
    assert_eq!(pts[0]["approx"], 0.0);
    assert!(d["result"]["complete"].as_bool().unwrap());
    json_of(&["gaps", "--poly", "-1,-1,1", "--bound", "3"]);
    json_of(&["spectrum", "--poly", "-2,0,1", "--kind", "y", "--degree", "4", "--bound", "1"]);
}

#[test]
fn expand_and_witness() {
    let d = json_of(&["expand", "--base", "1.2", "--mode", "lazy", "--pattern", "eventual:periodic:01"]);
    assert_eq!(d["result"]["certificate"]["pass"], true);
    let d = json_of(&["expand", "--poly", "-1,-1,1", "--x", "1", "--horizon", "10"]);
    assert_eq!(d["result"]["sequence"]["finitely_supported"], true);
    let d = json_of(&["witness", "--base", "1.8", "--m", "1", "--p", "-1.2,0", "--horizon", "60"]);
    assert_eq!(d["result"]["verdict"]["certified"], true);
    assert_eq!(d["result"]["status"], "cross-check, not a proof");
}

#[test]
fn exit_codes() {
    let capacity = spectra(&["expand", "--base", "1.5", "--mode", "lazy", "--pattern", "explicit:1;threshold:2;eventual:out"]);
    assert_eq!(capacity.status.code(), Some(2));
    let budget = spectra(&["minpos", "--poly", "-2,0,1", "--max-depth", "20", "--budget-states", "30"]);
    assert_eq!(budget.status.code(), Some(3));
    assert!(!budget.stdout.is_empty());
    let usage = spectra(&["spectrum", "--base", "1.5", "--kind", "y", "--bound", "1"]);
    assert_eq!(usage.status.code(), Some(2));
    let below = spectra(&["classify", "--base", "0.5"]);
    assert_eq!(below.status.code(), Some(2));
}

fn strip_wall_time(mut d: Value) -> Value {
    d["manifest"]["wall_time_ms"] = Value::Null;
    d["manifest"]["threads"] = Value::Null;
    d
}

#[test]
fn reruns_are_identical_across_thread_counts() {
    let args = |t: &'static str| ["minpos", "--poly", "-2,0,1", "--max-depth", "10", "--threads", t];
    let a = strip_wall_time(json_of(&args("1")));
    let b = strip_wall_time(json_of(&args("1")));
    let c = strip_wall_time(json_of(&args("4")));
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn precision_env_and_flag() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_spectra"));
        c.args(["classify", "--poly", "-2,0,1"]);
        match env {
            Some(v) => c.env("SPECTRA_DEFAULT_PRECISION", v),
            None => c.env_remove("SPECTRA_DEFAULT_PRECISION"),
        };
        if let Some(f) = flag {
            c.args(["--precision", f]);
        }
        let d: Value = serde_json::from_slice(&c.output().unwrap().stdout).unwrap();
        d["manifest"]["precision_bits"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 256);
    assert_eq!(run(Some("128"), None), 128);
    assert_eq!(run(Some("128"), Some("512")), 512);
}

#[test]
fn csv_embeds_manifest() {
    let out = spectra(&["witness", "--base", "1.8", "--p", "0,2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# manifest: {"));
    assert!(lines.next().unwrap().starts_with("n,digit,q_residual"));
    assert_eq!(lines.count(), 61);
}

#[test]
fn reproduce_single_and_list() {
    let d = json_of(&["reproduce", "lemma21-ii"]);
    assert_eq!(d["result"][0]["pass"], true);
    let d = json_of(&["reproduce", "list"]);
    assert_eq!(d["result"].as_array().unwrap().len(), 11);
    assert_eq!(spectra(&["reproduce", "nope"]).status.code(), Some(2));
}
