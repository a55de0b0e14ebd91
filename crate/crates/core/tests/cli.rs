use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plusminus")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn value_queries() {
    let out = run(&["value", "--sign", "+", "--p", "3", "--n", "3", "--a", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{\"zero\":false,\"num\":\"1\",\"den\":\"9\",\"p_val\":-2}\n");

    let v = json(&["value", "--sign", "+", "--p", "3", "--n", "2", "--a", "1"]);
    assert_eq!(v["zero"], true);

    let v = json(&["value", "--sign", "--", "--p", "2", "--n", "1", "--m", "1", "--a", "1", "--b", "1"]);
    assert_eq!((v["num"].as_str(), v["den"].as_str(), v["sign"].as_str()), (Some("1"), Some("16"), Some("--")));

    let v = json(&["bivalue", "--sign", "-+", "--p", "3", "--n", "1", "--m", "3", "--a", "2", "--b", "3", "--oracle"]);
    assert_eq!(v["agree"], true);
    assert_eq!(v["oracle"]["den"], "81");
}

#[test]
fn oracle_flag_on_negative_representative() {
    let v = json(&["value", "--sign", "-", "--p", "5", "--n", "2", "--a", "-18", "--oracle"]);
    // -18 = 7 mod 25, digits (2, 1)
    assert_eq!(v["agree"], true);
    assert_eq!(v["value"]["zero"], true);
}

#[test]
fn tables() {
    let out = run(&["table", "--sign", "-", "--p", "3", "--n", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",1,9")));

    let out = run(&["table", "--sign", "+", "--p", "2", "--n", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let nonzero: Vec<&str> = text
        .lines()
        .skip(1)
        .filter(|r| !r.ends_with(",0,1"))
        .map(|r| r.split(',').next().unwrap())
        .collect();
    assert_eq!(nonzero, ["0", "2"]);

    let out = run(&["table", "--sign", "+-", "--p", "3", "--n", "2", "--m", "1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1 + 27);
}

#[test]
fn table_row_cap() {
    let out = run(&["table", "--sign", "+", "--p", "3", "--n", "11"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn series_dumps() {
    let v = json(&["series", "--sign", "+", "--p", "3", "--tprec", "1", "--pprec", "4"]);
    let coeffs = v["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 1);
    assert_eq!((coeffs[0]["num"].as_str(), coeffs[0]["den"].as_str()), (Some("1"), Some("3")));

    let args = ["series", "--sign", "-", "--p", "2", "--tprec", "8", "--pprec", "6"];
    let v = json(&args);
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 8);
    assert_eq!(v["sign"], "-");
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "--suite", "oracle", "--p", "3", "--max-n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", "--suite", "logproduct", "--p", "2", "--tprec", "10", "--pprec", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["cases"].as_array().unwrap().len(), 10);
    let out = run(&["verify", "--suite", "all", "--p", "5", "--max-n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["notes"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["value", "--sign", "x", "--p", "3", "--n", "1", "--a", "0"]).status.code(), Some(2));
    assert_eq!(run(&["value", "--sign", "+", "--p", "6", "--n", "1", "--a", "0"]).status.code(), Some(2));
    assert_eq!(run(&["value", "--sign", "+", "--p", "3", "--n", "0", "--a", "0"]).status.code(), Some(2));
    assert_eq!(run(&["value", "--sign", "++", "--p", "3", "--n", "1", "--a", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "bogus", "--p", "3"]).status.code(), Some(2));
    assert_eq!(run(&["series", "--sign", "+", "--p", "2", "--pprec", "500"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "--suite", "oracle", "--p", "5", "--max-n", "9"]).status.code(), Some(3));
    let out = run(&["--version"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("format 1"));
}
