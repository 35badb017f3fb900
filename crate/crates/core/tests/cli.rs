use std::path::Path;
use std::process::Command;

use mrdkit::cli::run;
use serde_json::Value;

fn mrdkit(args: &[&str]) -> (i32, String) {
    let mut full = vec!["mrdkit"];
    full.extend_from_slice(args);
    run(full)
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json", "--canonical"];
    full.extend_from_slice(args);
    let (code, out) = mrdkit(&full);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn entry<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["name"] == name)
        .unwrap_or_else(|| panic!("no entry {name}"))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn construct_and_dual_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("g.json");
    let dual = dir.path().join("d.json");
    let back = dir.path().join("dd.json");
    let (c, r) = json(&["construct", "--q", "3", "--n", "2", "--ell", "1", "--out", p(&code)]);
    assert_eq!(c, 0);
    assert_eq!(r["result"]["dimension"], 2);
    assert_eq!(r["result"]["min_distance"], 2);
    assert_eq!(json(&["dual", "--in", p(&code), "--out", p(&dual)]).0, 0);
    assert_eq!(json(&["dual", "--in", p(&dual), "--out", p(&back)]).0, 0);
    let a: Value = serde_json::from_str(&std::fs::read_to_string(&code).unwrap()).unwrap();
    let b: Value = serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
    assert_eq!(a, b);
    let (c, r) = json(&["is-mrd", "--in", p(&dual)]);
    assert_eq!(c, 0, "{r}");
}

#[test]
fn construct_full_space_and_extension_base() {
    let (_, r) = json(&["construct", "--q", "3", "--n", "2", "--ell", "2"]);
    assert_eq!(r["result"]["dimension"], 4);
    let (c, r) = json(&["construct", "--q", "4", "--n", "2"]);
    assert_eq!(c, 0);
    assert_eq!(r["context"]["field"]["e"], 2);
    let (c, r) = json(&["construct", "--q", "3", "--n", "2", "--ell", "3"]);
    assert_eq!(c, 2);
    assert!(r["result"]["error"].as_str().unwrap().contains("ell"));
}

#[test]
fn certificate_flow() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let (c, r) = json(&["selfdualize", "--q", "3", "--n", "2", "--emit-certificate", p(&cert)]);
    assert_eq!(c, 0, "{r}");
    assert_eq!(r["result"]["params"]["i"], 4);
    assert_eq!(json(&["is-selfdual", "--in", p(&cert)]).0, 0);
    let (c, r) = json(&["verify-certificate", "--in", p(&cert)]);
    assert_eq!(c, 0, "{r}");
    assert!(r["entries"].as_array().unwrap().iter().all(|e| e["status"] == "pass"));

    // tamper with P
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let e = &mut v["P"]["entries"][0][0];
    *e = Value::from((e.as_u64().unwrap() + 1) % 3);
    std::fs::write(&cert, v.to_string()).unwrap();
    let (c, _) = json(&["verify-certificate", "--in", p(&cert)]);
    assert_ne!(c, 0);
}

#[test]
fn impossible_requests_exit_one() {
    let (c, r) = json(&["selfdualize", "--q", "3", "--n", "4"]);
    assert_eq!(c, 1);
    assert_eq!(r["result"]["scan"]["valid_triples"], 0);
    let (c, r) = json(&["selfdualize", "--q", "2", "--n", "2"]);
    assert_eq!(c, 1);
    assert!(r["result"]["impossible"].as_str().unwrap().contains("characteristic 2"));
    let (c, _) = json(&["selfdualize", "--q", "3", "--n", "3"]);
    assert_eq!(c, 2);
}

#[test]
fn resource_cap_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("g.json");
    json(&["construct", "--q", "3", "--n", "4", "--ell", "2", "--out", p(&code)]);
    let (c, r) = json(&["--max-work", "100", "is-mrd", "--in", p(&code)]);
    assert_eq!(c, 3);
    assert_eq!(entry(&r, "is-mrd")["status"], "skipped");
    assert_eq!(json(&["--max-work", "100", "distance", "--in", p(&code)]).0, 3);
}

#[test]
fn verify_theorems_q3_n2() {
    let (c, r) = json(&["verify-theorems", "--q", "3", "--n", "2"]);
    assert_eq!(c, 0);
    for e in r["entries"].as_array().unwrap() {
        if e["name"] != "char2" {
            assert_eq!(e["status"], "pass", "{e}");
        }
    }
    assert_eq!(entry(&r, "aut-order")["witness"], "exhaustive count 128 = formula 128");
    assert_eq!(entry(&r, "char2")["status"], "skipped");
}

#[test]
fn verify_theorems_large_and_char2() {
    let (c, r) = json(&["verify-theorems", "--q", "3", "--n", "6"]);
    assert_eq!(c, 0);
    assert_eq!(entry(&r, "dual-twist")["status"], "pass");
    assert_eq!(entry(&r, "selfdualize")["status"], "pass");
    assert_eq!(entry(&r, "mrd")["status"], "skipped");

    let (c, r) = json(&["verify-theorems", "--q", "2", "--n", "2"]);
    assert_eq!(c, 0);
    assert_eq!(entry(&r, "char2")["status"], "pass");
    assert_eq!(entry(&r, "gram-nonsquare")["status"], "skipped");
    assert_eq!(entry(&r, "dim2")["status"], "skipped");
}

#[test]
fn canonical_output_is_reproducible() {
    for args in [
        &["verify-theorems", "--q", "5", "--n", "2"][..],
        &["--format", "json", "automorphisms", "--q", "3", "--n", "2"],
    ] {
        let mut full = vec!["--canonical"];
        full.extend_from_slice(args);
        let a = mrdkit(&full);
        let b = mrdkit(&full);
        assert_eq!(a, b);
        assert!(!a.1.contains("elapsed"));
    }
    assert!(mrdkit(&["verify-theorems", "--q", "3", "--n", "2"]).1.contains("elapsed-ms"));
}

#[test]
fn classify_and_automorphisms() {
    let (c, r) = json(&["classify2x2", "--q", "3", "--equivalence"]);
    assert_eq!(c, 0);
    assert_eq!(r["result"]["count"], 8);
    assert_eq!(entry(&r, "pairwise-equivalent")["status"], "pass");
    assert_eq!(json(&["classify2x2", "--q", "5"]).1["result"]["count"], 0);
    let (c, r) = json(&["automorphisms", "--q", "3", "--n", "2"]);
    assert_eq!(c, 0);
    assert_eq!(r["result"]["order"], "128");
    assert_eq!(r["result"]["generators"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_and_data_errors_exit_two() {
    assert_eq!(mrdkit(&["frobnicate"]).0, 2);
    assert_eq!(mrdkit(&["construct", "--q", "3"]).0, 2);
    assert_eq!(mrdkit(&["construct", "--q", "6", "--n", "2"]).0, 2);
    assert_eq!(mrdkit(&["is-mrd", "--in", "/nonexistent/code.json"]).0, 2);
    assert_eq!(mrdkit(&["--help"]).0, 0);
}

#[test]
fn binary_honours_environment_cap() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("g.json");
    json(&["construct", "--q", "3", "--n", "4", "--ell", "2", "--out", p(&code)]);
    let out = Command::new(env!("CARGO_BIN_EXE_mrdkit"))
        .args(["is-mrd", "--in", p(&code)])
        .env("MRDKIT_MAX_WORK", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("SKIP"));
    let out =
        Command::new(env!("CARGO_BIN_EXE_mrdkit")).args(["selfdualize", "--q", "3", "--n", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
