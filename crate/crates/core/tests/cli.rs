use std::process::Command;

use serde_json::Value;

fn cuntz_kms(args: &[&str]) -> (Value, i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cuntz-kms")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let doc = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (doc, out.status.code().unwrap(), stderr)
}

#[test]
fn documents_have_the_common_envelope() {
    let (doc, code, _) = cuntz_kms(&["tensor-type", "--a", "1/3,2/3", "--b", "1/2,1/2"]);
    assert_eq!(code, 0);
    for key in ["command", "inputs", "result", "mode", "residual", "warnings"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["result"]["lambda"], "1");
    assert_eq!(doc["mode"], "exact");
}

#[test]
fn power_type_for_the_golden_pair() {
    let (doc, code, _) = cuntz_kms(&["power-type", "--p", "1", "--q", "2", "--k", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["formula_exponent"], 1);
    assert_eq!(doc["result"]["direct_exponent"], 1);
}

#[test]
fn inverse_temperature_of_the_full_shift() {
    let (doc, code, _) = cuntz_kms(&["solve-beta", "--matrix", "F2", "--omega", "1,1"]);
    assert_eq!(code, 0);
    let beta = &doc["result"]["beta"];
    let (lo, hi) = (beta["lo"].as_f64().unwrap(), beta["hi"].as_f64().unwrap());
    assert!(lo <= std::f64::consts::LN_2 && std::f64::consts::LN_2 <= hi);
}

#[test]
fn state_evaluation_and_kms() {
    let (doc, code, _) = cuntz_kms(&["state-eval", "--matrix", "F2", "--vector", "1/3,2/3", "--word", "s1 s2 s2* s1*"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["value"]["exact"], "2/9");
    let (doc, code, _) = cuntz_kms(&["--max-word-len", "1", "kms-check", "--matrix", "[[1,1],[1,0]]", "--omega", "1,2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["pass"], true);
}

#[test]
fn bad_input_exits_with_two() {
    let (_, code, stderr) = cuntz_kms(&["normalize", "--matrix", "[[1,1],[0,2]]", "--word", "s1"]);
    assert_eq!(code, 2);
    assert!(stderr.starts_with("error:"));
    let (_, code, _) = cuntz_kms(&["normalize", "--matrix", "F2", "--word", "s3"]);
    assert_eq!(code, 2);
}

#[test]
fn reproduction_report_is_consistent() {
    let (doc, code, _) = cuntz_kms(&["reproduce-paper"]);
    assert_eq!(code, 0);
    assert_eq!(doc["warnings"].as_array().unwrap().len(), 2);
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("cuntz-kms-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let (doc, _, _) = cuntz_kms(&["coassoc", "--dims", "2,3,2", "--out", path.to_str().unwrap()]);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc, written);
    std::fs::remove_dir_all(dir).ok();
}
