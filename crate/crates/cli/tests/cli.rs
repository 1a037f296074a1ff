use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn invgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invgen"))
        .args(args)
        .env_remove("INVGEN_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = invgen(&full);
    let value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{args:?}: bad JSON ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (out.status.code().unwrap(), value)
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn group_info_a5() {
    let (code, v) = json(&["group-info", "A5"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "invgen.cli/1");
    let r = &v["result"];
    assert_eq!(r["k"], 5);
    assert_eq!(r["order"], 60);
    assert_eq!(r["maximal_orders"], serde_json::json!([12, 10, 6]));
    assert_eq!(r["out_order"], 2);
    assert_eq!(r["frattini_order"], 1);
    assert_eq!(v["config"]["command"], "group-info");
    assert_eq!(v["config"]["budgets"]["lattice"], 2500);
}

#[test]
fn group_info_c6_has_one_maximal_class_per_prime() {
    let (code, v) = json(&["group-info", "C6"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["k"], 6);
    assert_eq!(v["result"]["maximal_orders"], serde_json::json!([3, 2]));
}

#[test]
fn budget_and_parse_errors_exit_2() {
    let out = invgen(&["group-info", "S8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds budget"));
    let out = invgen(&["--budget-elements", "50", "di", "A5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = invgen(&["di", "Z5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 0"));
    let out = invgen(&["invgen", "A5", "(1,2)"]);
    assert_eq!(out.status.code(), Some(2));
    let out = invgen(&["mexact", "S4", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invgen_verdicts_and_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json(&["invgen", "A5", "(1,2,3,4,5)"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["certificate"]["verdict"], "no");
    assert_eq!(v["result"]["certificate"]["maximal_order"], 10);
    let no = write(dir.path(), "no.json", &v.to_string());
    assert_eq!(invgen(&["verify-certificate", &no]).status.code(), Some(0));

    let (code, v) = json(&["invgen", "A5", "(1,2,3,4,5)", "(1,2,3)"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["certificate"]["verdict"], "yes");
    let yes = write(dir.path(), "yes.json", &v["result"].to_string());
    assert_eq!(invgen(&["verify-certificate", &yes]).status.code(), Some(0));

    // Tampering: cite a subgroup that contains the claimed avoider.
    let mut bad = v["result"].clone();
    bad["elements"][1] = "(1,2)(3,4)".into();
    let bad = write(dir.path(), "bad.json", &bad.to_string());
    let (code, r) = json(&["verify-certificate", &bad]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["accepted"], false);

    let junk = write(dir.path(), "junk.json", "{");
    assert_eq!(invgen(&["verify-certificate", &junk]).status.code(), Some(2));
}

#[test]
fn di_of_simple_groups() {
    let dir = tempfile::tempdir().unwrap();
    for g in ["A5", "PSL(2,7)"] {
        let (code, v) = json(&["di", g]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["value"], 2);
        let f = write(dir.path(), "di.json", &v.to_string());
        assert_eq!(invgen(&["verify-certificate", &f]).status.code(), Some(0));
    }
    let (_, v) = json(&["di", "C2^3"]);
    assert_eq!(v["result"]["value"], 3);
}

#[test]
fn lemma42_yes_and_no() {
    let dir = tempfile::tempdir().unwrap();
    let yes = write(dir.path(), "yes.txt", "(1,2,3,4,5); (1,2,3)\n(1,2,3); (1,2,3,4,5)\n");
    let (code, v) = json(&["lemma42", "A5", &yes, "--cross-check", "100"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["certificate"]["verdict"], "yes");
    assert!(v["result"]["cross_check"]["refutation"].is_null());
    let cert = write(dir.path(), "yes.json", &v.to_string());
    assert_eq!(invgen(&["verify-certificate", &cert]).status.code(), Some(0));

    let equal = write(dir.path(), "eq.txt", "(1,2,3,4,5); (1,2,3,4,5)\n(1,2,3); (1,2,3)\n");
    let (code, v) = json(&["lemma42", "A5", &equal, "--cross-check", "10"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["certificate"]["verdict"], "columns_collide");
    assert_eq!(v["result"]["cross_check"]["witness"]["kind"], "twisted_diagonal");
    assert_eq!(v["result"]["cross_check"]["witness"]["rows_absorbed"], 2);
    let cert = write(dir.path(), "eq.json", &v.to_string());
    assert_eq!(invgen(&["verify-certificate", &cert]).status.code(), Some(0));

    let ragged = write(dir.path(), "ragged.txt", "(1,2,3); ()\n(1,2,3)\n");
    assert_eq!(invgen(&["lemma42", "A5", &ragged]).status.code(), Some(2));
}

#[test]
fn mexact_and_bounds() {
    let (code, v) = json(&["mexact", "A5", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["m_exact"], 0);
    let (_, v) = json(&["mexact", "A5", "2"]);
    assert_eq!(v["result"]["m_exact"], 2);
    assert_eq!(v["result"]["witness"].as_array().unwrap().len(), 2);
    let (code, v) = json(&["bounds", "A5", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["holds"], true);
    assert_eq!(v["result"]["mtr"]["lower"], -0.5);
    assert_eq!(v["result"]["mtr"]["upper"], 25);
    assert_eq!(v["result"]["three_row"].as_array().unwrap().len(), 2);
    let (code, v) = json(&["bounds", "PSL(2,7)", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["psl"]["q"], 7);
}

#[test]
fn cache_hits_match_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = |extra: &[&'static str]| {
        let mut a = vec!["--format", "json", "--cache-dir", cache];
        a.extend_from_slice(extra);
        a
    };
    for cmd in [
        &["bounds", "A5", "2"][..],
        &["di", "S4"][..],
        &["invgen", "A5", "(1,2,3)"][..],
    ] {
        let cold = invgen(&args(cmd));
        let warm = invgen(&args(cmd));
        let mut off = args(cmd);
        off.push("--no-cache");
        let fresh = invgen(&off);
        assert_eq!(cold.stdout, warm.stdout, "{cmd:?}");
        assert_eq!(cold.stdout, fresh.stdout, "{cmd:?}");
        assert_eq!(cold.status.code(), fresh.status.code());
    }
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 3);
}

#[test]
fn verify_suite_quick_is_deterministic() {
    let first = invgen(&["--format", "json", "verify-suite", "quick"]);
    let second = invgen(&["--format", "json", "verify-suite", "quick"]);
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stdout)
    );
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["result"]["schema"], "invgen.suite/1");
    assert_eq!(v["result"]["criteria"].as_array().unwrap().len(), 9);
}
