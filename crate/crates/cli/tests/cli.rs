use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    report: Value,
    stdout: String,
}

fn fldkit(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_fldkit")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf-8");
    Run {
        code: out.status.code().expect("exited"),
        report: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stdout,
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn chain_json(n: usize) -> String {
    let names: Vec<String> = (0..n).map(|i| format!("\"c{i}\"")).collect();
    let le: Vec<String> = (1..n).map(|i| format!("[\"c{}\",\"c{i}\"]", i - 1)).collect();
    format!("{{\"elements\":[{}],\"le\":[{}]}}", names.join(","), le.join(","))
}

#[test]
fn eval_check_mode() {
    let d = TempDir::new().unwrap();
    let c2 = write(&d, "c2.json", &chain_json(2));
    let r = fldkit(&["eval", "--poset", &c2, "--formula", "exists t . forall u . u <= t", "--check"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["value"], Value::Bool(true));
    let r = fldkit(&["eval", "--poset", &c2, "--formula", "forall t . forall u . t = u", "--check"]);
    assert_eq!(r.code, 1);
    let r = fldkit(&["eval", "--poset", &c2, "--formula", "x <= y", "--assign", "x=c0,y=c1"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["free_variables"], serde_json::json!(["x", "y"]));
}

#[test]
fn formula_from_file() {
    let d = TempDir::new().unwrap();
    let c2 = write(&d, "c2.json", &chain_json(2));
    let f = write(&d, "f.txt", "exists t . forall u . t <= u\n");
    let r = fldkit(&["eval", "--poset", &c2, "--formula", &format!("@{f}"), "--check"]);
    assert_eq!(r.code, 0);
}

#[test]
fn error_exit_codes() {
    let d = TempDir::new().unwrap();
    let bad = write(&d, "bad.json", "{\"elements\": [\"a\"");
    let r = fldkit(&["eval", "--poset", &bad, "--formula", "x = x"]);
    assert_eq!(r.code, 2);
    assert!(r.report["error"]["message"].as_str().unwrap().contains("column"));

    let cyc = write(&d, "cyc.json", r#"{"elements":["a","b"],"le":[["a","b"],["b","a"]]}"#);
    let r = fldkit(&["eval", "--poset", &cyc, "--formula", "x = x"]);
    assert_eq!(r.code, 3);
    assert!(r.report["error"]["message"].as_str().unwrap().contains("antisymmetry violation"));

    let c2 = write(&d, "c2.json", &chain_json(2));
    assert_eq!(fldkit(&["eval", "--poset", &c2, "--formula", "x <= "]).code, 2);
    assert_eq!(fldkit(&["eval", "--poset", &c2, "--formula", "x <= y", "--assign", "x=c0"]).code, 3);
    assert_eq!(fldkit(&["verify", "no-such-suite"]).code, 2);
    assert_eq!(fldkit(&["verify", "relativization", "--bound", "9"]).code, 4);
    assert_eq!(fldkit(&["ef", "--left", &c2, "--right", &c2, "--k", "9"]).code, 4);
    let c11 = write(&d, "c11.json", &chain_json(11));
    assert_eq!(fldkit(&["decompose", "--poset", &c11]).code, 4);
}

#[test]
fn decompose_counts_and_transfer() {
    let d = TempDir::new().unwrap();
    let c4 = write(&d, "c4.json", &chain_json(4));
    let c5 = write(&d, "c5.json", &chain_json(5));
    let a2 = write(&d, "a2.json", r#"{"elements":["p","q"],"le":[]}"#);
    let r = fldkit(&["decompose", "--poset", &c4, "--mode", "fld1"]);
    assert_eq!((r.code, r.report["results"]["count"].as_u64()), (0, Some(8)));
    let r = fldkit(&["decompose", "--poset", &a2]);
    assert_eq!(r.report["results"]["count"].as_u64(), Some(1));

    let r = fldkit(&["decompose", "--poset", &c4, "--emit-formulas", "--transfer", &c5]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let transfers = r.report["results"]["transfers"].as_array().unwrap();
    assert_eq!(transfers.len(), 8);
    assert!(transfers.iter().all(|t| t["found"] == Value::Bool(true)));
    let verdicts = r.report["verification"].as_array().unwrap();
    assert_eq!(verdicts.len(), 16);
    assert!(verdicts.iter().all(|v| v["passed"] == Value::Bool(true)));
    assert!(r.report["results"]["formulas"][0]["formulas"]["phi_i"].is_array());
}

#[test]
fn transfer_with_block_sentences() {
    let d = TempDir::new().unwrap();
    let c4 = write(&d, "c4.json", &chain_json(4));
    let a2 = write(&d, "a2.json", r#"{"elements":["p","q"],"le":[]}"#);
    // the single-block decomposition of the 4-chain, with "linear" as its block sentence
    let args = ["decompose", "--poset", &c4, "--pick", "0", "--transfer", &a2, "--sentence", "forall s . forall t . (s <= t | t <= s)"];
    let r = fldkit(&args);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["transfers"][0]["found"], Value::Bool(false));
}

#[test]
fn verify_suites() {
    for (suite, bound) in [("relativization", "4"), ("sum-composition", "3"), ("closure-onestep", "5")] {
        let r = fldkit(&["verify", suite, "--bound", bound, "--seed", "3"]);
        assert_eq!(r.code, 0, "{suite}");
        assert_eq!(r.report["verification"][0]["passed"], Value::Bool(true));
    }
}

#[test]
fn ef_and_classify() {
    let d = TempDir::new().unwrap();
    let c3 = write(&d, "c3.json", &chain_json(3));
    let c4 = write(&d, "c4.json", &chain_json(4));
    let c2 = write(&d, "c2.json", &chain_json(2));
    let r = fldkit(&["ef", "--left", &c3, "--right", &c4, "--k", "2", "--check"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["game"]["winner"], "II");
    let r = fldkit(&["ef", "--left", &c2, "--right", &c3, "--k", "2", "--check"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["results"]["game"]["winner"], "I");
    let r = fldkit(&["ef", "--left", &c3, "--right", &c4, "--k", "1", "--left-pins", "c0", "--right-pins", "c3"]);
    assert_eq!(r.report["results"]["equivalent"], Value::Bool(false));

    let n = write(&d, "n.json", r#"{"elements":["a","b","c","d"],"le":[["a","c"],["b","c"],["b","d"]]}"#);
    let r = fldkit(&["classify", "--poset", &n]);
    assert_eq!(r.report["results"]["predicates"]["reticle"], Value::Bool(false));
    assert!(r.report["results"]["n_embedding"].is_array());
}

#[test]
fn closure_canon_relativize() {
    let d = TempDir::new().unwrap();
    let r = fldkit(&["closure", "--base", "singleton-only", "--bound", "4"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["size"].as_u64(), Some(24));
    let seeds = write(&d, "seeds.json", r#"["2:00"]"#);
    let r = fldkit(&["closure", "--base", &format!("seeds:{seeds}"), "--op", "union-product", "--bound", "4"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(fldkit(&["closure", "--base", "no-such-class", "--bound", "3"]).code, 2);

    let a = write(&d, "a.json", r#"{"elements":["y","x"],"le":[["x","y"]]}"#);
    let b = write(&d, "b.json", &chain_json(2));
    let ca = fldkit(&["canon", "--poset", &a]);
    let cb = fldkit(&["canon", "--poset", &b]);
    assert_eq!(ca.report["results"]["canonical"], cb.report["results"]["canonical"]);

    let r = fldkit(&["relativize", "--formula", "forall u . u <= x", "--relativizer", "v <= w", "--params", "w"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["formula"], "forall u . (u <= w -> u <= x)");
    let r = fldkit(&["relativize", "--formula", "x = x", "--relativizer", "v <= z", "--params", "w"]);
    assert_eq!(r.code, 3);
}

#[test]
fn output_is_deterministic() {
    let d = TempDir::new().unwrap();
    let c4 = write(&d, "c4.json", &chain_json(4));
    let args = ["decompose", "--poset", &c4, "--emit-formulas"];
    assert_eq!(fldkit(&args).stdout, fldkit(&args).stdout);
    let v = ["verify", "transfer", "--bound", "3", "--seed", "11"];
    assert_eq!(fldkit(&v).stdout, fldkit(&v).stdout);
    assert!(fldkit(&["--timing", "canon", "--poset", &c4]).report["wall_time_ms"].is_u64());
    assert!(fldkit(&["canon", "--poset", &c4]).report.get("wall_time_ms").is_none());
}
