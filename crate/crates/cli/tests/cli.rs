use std::process::{Command, Output};

use serde_json::Value;

fn hz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperzeta")).args(args).env_remove("HYPERZETA_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim_end().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn qbinom_outputs() {
    assert_eq!(stdout(&hz(&["qbinom", "--m", "7", "--t", "5", "--ell", "5"])), "1");
    assert_eq!(stdout(&hz(&["qbinom", "--m", "2", "--t", "1", "--symbolic"])), "q + q^-1");
    assert_eq!(stdout(&hz(&["qbinom", "--m", "-2", "--t", "3", "--symbolic"])), "-(q^3 + q + q^-1 + q^-3)");
    let j = json(&hz(&["qbinom", "--m", "5", "--t", "5", "--ell", "5", "--json"]));
    assert_eq!(j["ell"], 5);
    assert_eq!(j["coeffs"][0], "1");
}

#[test]
fn exit_codes() {
    assert_eq!(hz(&["qbinom", "--m", "1"]).status.code(), Some(2));
    assert_eq!(hz(&["qbinom", "--m", "1", "--t", "1", "--ell", "4"]).status.code(), Some(2));
    assert_eq!(hz(&["nf", "E^(", "--ell", "5"]).status.code(), Some(2));
    assert_eq!(hz(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hz(&["weight", "embed", "1,1", "--cartan", "G2", "--ell", "9"]).status.code(), Some(2));
    let capped = hz(&["nf", "(E + F + K + B)^6", "--ell", "5", "--max-terms", "50"]);
    assert_eq!(capped.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("50"));
    assert_eq!(hz(&["verify", "--suite", "qcomb", "--ell", "3"]).status.code(), Some(0));
}

#[test]
fn weight_commands() {
    let add = json(&hz(&["weight", "add", "(3)(0)", "(4)(0)", "--ell", "5"]));
    assert_eq!(add, serde_json::json!({"lam0": [2], "lam1": [1]}));
    let embed = json(&hz(&["weight", "embed", "-7", "--ell", "5"]));
    assert_eq!(embed, serde_json::json!({"lam0": [3], "lam1": [-2]}));
    let neg = json(&hz(&["weight", "neg", r#"{"lam0":[0],"lam1":[0]}"#, "--ell", "7"]));
    assert_eq!(neg, serde_json::json!({"lam0": [0], "lam1": [0]}));
    let sub = json(&hz(&["weight", "sub", "(1,0)(0,0)", "(2,0)(0,0)", "--cartan", "A2", "--ell", "3"]));
    assert_eq!(sub, serde_json::json!({"lam0": [2, 0], "lam1": [-1, 0]}));
    assert_eq!(stdout(&hz(&["weight", "leq", "(1)(0)", "(0)(1)", "--ell", "3", "--pretty"])), "true");
}

#[test]
fn normal_forms() {
    assert_eq!(stdout(&hz(&["nf", "K^5", "--ell", "5", "--pretty"])), "(1)");
    assert_eq!(stdout(&hz(&["nf", "K E - z^2 E K", "--ell", "7", "--pretty"])), "0");
    let j = json(&hz(&["nf", "B F^(2)", "--ell", "5"]));
    let terms = j["terms"].as_array().unwrap();
    assert!(!terms.is_empty());
    assert!(terms.iter().all(|t| t["b"] == 2 && t["a"] == 0));
    let ef = json(&hz(&["nf", "E F", "--ell", "5"]));
    let terms = ef["terms"].as_array().unwrap();
    assert!(terms.iter().any(|t| t["b"] == 1 && t["a"] == 1));
    assert!(terms.iter().filter(|t| t["b"] == 0 && t["a"] == 0).count() >= 1);
}

#[test]
fn module_commands() {
    let w = stdout(&hz(&["module", "--m0", "2", "--ell", "5", "--action", "weights", "--pretty"]));
    assert_eq!(w, "L(2), dim 3: [((2), (0)), ((0), (0)), ((3), (-1))]");
    let p = json(&hz(&["module", "--m", "7", "--ell", "3", "--action", "primitive"]));
    let lines = p["lines"].as_array().unwrap();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["text"], "((1), (2))");
    assert_eq!(lines[0]["basis"].as_array().unwrap().len(), 1);
    let m = json(&hz(&["module", "--m0", "0", "--ell", "3", "--action", "matrices"]));
    assert_eq!(m["dim"], 1);
    assert_eq!(m["matrices"]["K"], serde_json::json!([[["1", "0"]]]));
    assert_eq!(m["matrices"]["E"], serde_json::json!([[["0", "0"]]]));
    assert_eq!(hz(&["module", "--ell", "3"]).status.code(), Some(2));
    assert_eq!(hz(&["module", "--m0", "3", "--ell", "3"]).status.code(), Some(2));
}

#[test]
fn primitive_command() {
    let p3 = json(&hz(&["primitive", "--ell", "3"]));
    assert_eq!(p3["a"][0]["text"], "1/3");
    assert_eq!(p3["a"].as_array().unwrap().len(), 3);
    assert_eq!(p3["residual"], "0");
    assert_eq!(p3["value_at_zero"], "0");
    let p5 = json(&hz(&["primitive", "--ell", "5"]));
    assert_eq!(p5["a"][0]["text"], "2/5");
}

#[test]
fn verify_is_byte_stable() {
    let args = ["verify", "--suite", "weights,qcomb", "--ell", "3,5", "--seed", "11"];
    let a = hz(&args);
    let b = hz(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["seed"], 11);
    let suites: Vec<&str> = report["suites"].as_array().unwrap().iter().map(|s| s["suite"].as_str().unwrap()).collect();
    assert_eq!(suites, ["qcomb", "weights"]);
    let env = Command::new(env!("CARGO_BIN_EXE_hyperzeta"))
        .args(["verify", "--suite", "weights,qcomb", "--ell", "3,5"])
        .env("HYPERZETA_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
}
