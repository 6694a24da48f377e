use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hsums(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsums"))
        .args(args)
        .env_remove("HSUMS_DIGITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = hsums(&all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (o.status.code().expect("exit code"), v)
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("hsums-cli-{}-{name}", std::process::id()))
}

#[test]
fn exact_evaluation() {
    let o = hsums(&["eval", "S[1,1,1,1,1,1](N)", "--N", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "N=7  36845364451242061/5489031744000000");
    let (code, v) = json(&["eval", "-S[-2](N)", "--N", "1..3"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "hsums-eval/1");
    let values: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["1", "3/4", "31/36"]);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["eval", "S[1,0](N)", "--N", "3"][..],
        &["eval", "S[1](N)"],
        &["basis", "--weight", "7"],
        &["--digits", "10", "constants"],
        &["--catalog", "x.json", "constants"],
        &["continue", "2,1", "--N", "-3"],
        &["continue", "-2,1", "--N", "2.5"],
    ] {
        let o = hsums(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    assert!(stderr(&hsums(&["eval", "S[1,0](N)", "--N", "3"])).contains("zero index"));
}

#[test]
fn basis_listing() {
    let o = hsums(&["basis", "--weight", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 20);
    let (_, v) = json(&["basis", "--weight", "5", "--cumulative"]);
    assert_eq!(v["count"], 15);
}

#[test]
fn verification_passes_and_reports() {
    let (code, v) = json(&["verify", "--section", "5", "--N", "1..6", "--digits", "40"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "hsums-verify/1");
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() >= 1);
    assert!(v.get("completeness").is_none());
}

#[test]
fn failing_relations_are_named_with_their_residual() {
    let path = scratch("bad.json");
    let cat = r#"{"schema": "hsums-catalog/1", "relations": [
        {"id": "good", "group": "2", "lhs": "S[2,1](N)", "rhs": "S[1](N)*S[2](N) - S[1,2](N) + S[3](N)", "domain": "n"},
        {"id": "off-by-one", "group": "2", "lhs": "S[2,1](N)", "rhs": "S[2,1](N) + 1/1000", "domain": "n"}
    ]}"#;
    std::fs::write(&path, cat).unwrap();
    let o = hsums(&["verify", "--catalog", path.to_str().unwrap(), "--N", "1..4"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("off-by-one") && err.contains("1.00e-3"), "{err}");
    assert!(!err.contains("good"));
}

#[test]
fn json_reports_are_deterministic() {
    let a = hsums(&["constants", "--format", "json"]);
    let b = hsums(&["constants", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let a = hsums(&["reduce", "2,1,1", "-2,1", "--format", "json"]);
    let b = hsums(&["reduce", "2,1,1", "-2,1", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_can_go_to_a_file() {
    let path = scratch("out.json");
    let o = hsums(&["basis", "--weight", "3", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["schema"], "hsums-basis/1");
}

#[test]
fn continuation_matches_integers_and_reports_shift() {
    let (code, v) = json(&["continue", "2,1,1,1,1", "--N", "6,2.5", "--check-shift"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "hsums-continue/1");
    assert_eq!(v["route"], "decomposition");
    let r = &v["results"][0];
    let got: f64 = r["value"]["re"].as_str().unwrap().parse().unwrap();
    // S_{2,1,1,1,1}(6) by direct summation: S_1, S_11, S_111, S_1111, then the outer 1/k^2
    let mut s = [0f64; 5];
    for k in 1..=6 {
        let k = f64::from(k);
        let mut inner = 1.0;
        for (j, slot) in s.iter_mut().enumerate() {
            *slot += inner / if j == 4 { k * k } else { k };
            inner = *slot;
        }
    }
    assert!((got - s[4]).abs() < 1e-12, "{got} vs {}", s[4]);
    let d: f64 = v["results"][1]["shift_difference"].as_str().unwrap().parse().unwrap();
    assert!(d < 1e-20);
}

#[test]
fn negative_vectors_and_odd_branch() {
    let o = hsums(&["continue", "-2", "--N", "3", "--branch", "odd"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("-8.61111111111111111111111111111e-1"));
}

#[test]
fn asymptotic_coefficients() {
    let (code, v) = json(&["asym", "1-x", "--variable", "n", "--terms", "4"]);
    assert_eq!(code, 0);
    let c: Vec<&str> = v["coefficients"].as_array().unwrap().iter().map(|e| e["coeff"].as_str().unwrap()).collect();
    assert_eq!(c, ["0", "1", "-3", "7"]);
    let (_, v) = json(&["asym", "Li5(1-x)/(1-x)", "--terms", "3"]);
    let c: Vec<&str> = v["coefficients"].as_array().unwrap().iter().map(|e| e["coeff"].as_str().unwrap()).collect();
    assert_eq!(c[1..], ["1/32", "-179/7776"]);
}
