use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn usym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_usym"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("run usym")
}

fn usym_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_usym"))
        .args(args)
        .env(key, value)
        .current_dir(root())
        .output()
        .expect("run usym")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

const DUAL: &str = "fixtures/algebras/dual_numbers.json";
const TRI: &str = "fixtures/algebras/triangular.json";
const K: &str = "fixtures/algebras/base_field.json";

#[test]
fn exit_codes() {
    assert_eq!(usym(&["present", DUAL]).status.code(), Some(0));
    assert_eq!(usym(&["present", "fixtures/missing.json"]).status.code(), Some(1));
    assert_eq!(usym(&["present", DUAL, "--field", "F4"]).status.code(), Some(1));
    assert_eq!(usym(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(usym(&["endo", DUAL]).status.code(), Some(1), "Q has no enumeration");
    assert_eq!(usym(&["present", TRI, "--max-degree", "1"]).status.code(), Some(2));
    let big = usym_env(&["endo", TRI, "--field", "F3"], "USYM_MAX_SEARCH", "100");
    assert_eq!(big.status.code(), Some(3));
    let big = usym_env(&["gradings", TRI, "--field", "F3", "--group", "cyclic:2"], "USYM_MAX_SEARCH", "100");
    assert_eq!(big.status.code(), Some(3));
    assert_eq!(usym(&["--help"]).status.code(), Some(0));
}

#[test]
fn invalid_inputs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let bad_unit = dir.join("bad_unit.json");
    std::fs::write(
        &bad_unit,
        r#"{"field": "Q", "dimension": 2, "basis": ["a", "b"], "unit": 2, "tau": [[2, 2, 2, "1"]]}"#,
    )
    .unwrap();
    let not_assoc = dir.join("not_assoc.json");
    std::fs::write(
        &not_assoc,
        r#"{"field": "Q", "dimension": 2, "basis": ["1", "x"], "unit": 1,
            "tau": [[1, 1, 1, "1"], [1, 2, 2, "1"], [2, 1, 2, "1"], [2, 2, 1, "1"], [2, 2, 2, "1"], [1, 2, 1, "1"]]}"#,
    )
    .unwrap();
    let bad_group = dir.join("bad_group.json");
    std::fs::write(
        &bad_group,
        r#"{"elements": ["e", "g"], "identity": "e", "table": [["e", "g"], ["g", "g"]]}"#,
    )
    .unwrap();
    for f in [&bad_unit, &not_assoc] {
        let out = usym(&["present", f.to_str().unwrap(), "--format", "json"]);
        assert_eq!(out.status.code(), Some(1));
        assert_eq!(json(&out)["status"], "error");
    }
    let out = usym(&["gradings", DUAL, "--field", "F3", "--group", bad_group.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn base_field_is_trivial() {
    let r = json(&usym(&["present", K, "--format", "json"]));
    assert_eq!(r["result"]["generators"], serde_json::json!([]));
    assert_eq!(r["result"]["rules"], serde_json::json!([]));
    let r = json(&usym(&["check", K, "--format", "json"]));
    assert_eq!(r["status"], "ok");
    for cmd in ["endo", "aut"] {
        let r = json(&usym(&[cmd, K, "--field", "F5", "--oracle", "--format", "json"]));
        assert_eq!(r["result"]["order"], 1);
    }
    let r = json(&usym(&["gradings", K, "--field", "F2", "--group", "cyclic:3", "--classify", "--format", "json"]));
    assert_eq!(r["result"]["points"].as_array().unwrap().len(), 1);
    assert_eq!(r["result"]["classes"], serde_json::json!([[1]]));
}

#[test]
fn documented_counts() {
    let r = json(&usym(&["endo", DUAL, "--field", "F5", "--format", "json"]));
    assert_eq!(r["result"]["order"], 5);
    let r = json(&usym(&["aut", DUAL, "--field", "F5", "--format", "json"]));
    assert_eq!(r["result"]["order"], 4);
    let r = json(&usym(&["endo", TRI, "--field", "F2", "--oracle", "--format", "json"]));
    assert_eq!(r["result"]["order"], r["result"]["oracle_count"]);
    let r = json(&usym(&[
        "gradings", DUAL, "--field", "F3", "--group", "fixtures/groups/c2.json", "--classify", "--oracle", "--format", "json",
    ]));
    assert_eq!(r["status"], "ok");
    assert_eq!(r["result"]["points"].as_array().unwrap().len(), 2);
    assert_eq!(r["result"]["classes"].as_array().unwrap().len(), 2);
    for g in ["cyclic:1", "fixtures/groups/c2.json"] {
        let r = json(&usym(&["gradings", TRI, "--field", "F2", "--group", g, "--classify", "--oracle", "--format", "json"]));
        assert_eq!(r["status"], "ok", "{g}");
        if g == "cyclic:1" {
            assert_eq!(r["result"]["classes"].as_array().unwrap().len(), 1);
        }
    }
}

#[test]
fn field_override_changes_arithmetic() {
    let r = json(&usym(&["present", TRI, "--field", "F2", "--format", "json"]));
    assert_eq!(r["result"]["field"], "F2");
    let rules = r["result"]["rules"].as_array().unwrap();
    assert!(rules.iter().all(|x| !x["rhs"].as_str().unwrap().contains('-')));
}

#[test]
fn reports_validate_against_schema() {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(root().join("schema/report.schema.json")).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let runs: Vec<Vec<&str>> = vec![
        vec!["present", DUAL],
        vec!["present", TRI, "--max-degree", "1"],
        vec!["check", TRI],
        vec!["endo", DUAL, "--field", "F3", "--field-check", "--oracle"],
        vec!["aut", TRI, "--field", "F2"],
        vec!["gradings", TRI, "--field", "F2", "--group", "fixtures/groups/c2xc2.json", "--classify", "--oracle"],
        vec!["gradings", DUAL, "--field", "F2", "--group", "cyclic:2"],
        vec!["endo", DUAL],
        vec!["present", "fixtures/missing.json"],
    ];
    for args in runs {
        let mut full = args.clone();
        full.extend(["--format", "json"]);
        let report = json(&usym(&full));
        let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}

#[test]
fn digest_tracks_file_contents() {
    let r = json(&usym(&["present", DUAL, "--format", "json"]));
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let copy = dir.join("dual.json");
    let text = std::fs::read_to_string(root().join(DUAL)).unwrap();
    std::fs::write(&copy, &text).unwrap();
    let same = json(&usym(&["present", copy.to_str().unwrap(), "--format", "json"]));
    assert_eq!(r["inputs"][0]["sha256"], same["inputs"][0]["sha256"]);
    std::fs::write(&copy, format!("{text}\n")).unwrap();
    let changed = json(&usym(&["present", copy.to_str().unwrap(), "--format", "json"]));
    assert_ne!(r["inputs"][0]["sha256"], changed["inputs"][0]["sha256"]);
    assert_eq!(r["result"], changed["result"]);
}
