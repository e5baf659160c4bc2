use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn incidence(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_incidence"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const CHAIN3: &str =
    r#"{"elements": ["1", "2", "3"], "relations": [["1", "2"], ["2", "3"], ["1", "3"]]}"#;
const T2: &str = r#"{"elements": ["1", "2"], "relations": [["1", "2"]]}"#;
const M2: &str = r#"{"elements": ["1", "2"], "relations": [["1", "2"], ["2", "1"]]}"#;

#[test]
fn basis_both_methods_agree() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "chain3.json", CHAIN3);
    let out = incidence(&[
        "basis",
        "--poset",
        s(&p),
        "--ring",
        "Q",
        "--kind",
        "lie",
        "--method",
        "both",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["comparison"]["relation"], "equal");
    assert_eq!(v["bruteforce"]["rank"], v["closed_form"]["rank"]);
}

#[test]
fn basis_output_file() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "t2.json", T2);
    let target = dir.path().join("basis.json");
    let out = incidence(&[
        "basis",
        "--poset",
        s(&p),
        "--kind",
        "derivation",
        "--output",
        s(&target),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["rank"], 2);
    assert_eq!(v["method"], "bruteforce");
}

#[test]
fn solver_rejects_non_fields() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "t2.json", T2);
    for ring in ["Z", "Z/4", "Z/2", "R"] {
        let out = incidence(&["basis", "--poset", s(&p), "--ring", ring]);
        assert_eq!(out.status.code(), Some(1), "{ring}");
        assert!(!out.stderr.is_empty());
    }
    let out = incidence(&["basis", "--poset", s(&p), "--ring", "Z/2", "--exploratory"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn closed_form_rejects_disconnected() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "anti.json", r#"{"elements": ["1", "2"]}"#);
    let out = incidence(&["basis", "--poset", s(&p), "--method", "closed-form"]);
    assert_eq!(out.status.code(), Some(1));
    let out = incidence(&["basis", "--poset", s(&p)]);
    assert_eq!(json(&out)["rank"], 4);
}

#[test]
fn validate_accepts_closed_files_only() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", CHAIN3);
    assert_eq!(
        incidence(&["validate", "--poset", s(&good)]).status.code(),
        Some(0)
    );
    let open = write(
        &dir,
        "open.json",
        r#"{"elements": ["1", "2", "3"], "relations": [["1", "2"], ["2", "3"]]}"#,
    );
    let out = incidence(&["validate", "--poset", s(&open)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("relations"));
    let broken = write(&dir, "broken.json", "{\"elements\": [\"1\",\n  \"2\"");
    let out = incidence(&["validate", "--poset", s(&broken)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let unknown = write(
        &dir,
        "unknown.json",
        r#"{"elements": ["1"], "relations": [["1", "9"]]}"#,
    );
    assert_eq!(
        incidence(&["validate", "--poset", s(&unknown)])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn decompose_exit_codes() {
    let dir = TempDir::new().unwrap();
    let t2 = write(&dir, "t2.json", T2);
    let m2 = write(&dir, "m2.json", M2);
    // ad_{e12}: e11 -> -e12, e22 -> e12
    let ad = write(
        &dir,
        "ad.json",
        r#"{"columns": [
            {"i": "1", "j": "1", "image": {"entries": [{"from": "1", "to": "2", "value": "-1"}]}},
            {"i": "2", "j": "2", "image": {"entries": [{"from": "1", "to": "2", "value": "1"}]}}
        ]}"#,
    );
    let out = incidence(&[
        "decompose",
        "--poset",
        s(&t2),
        "--ring",
        "Q",
        "--operator",
        s(&ad),
        "--method",
        "coefficients",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["verified"]
        .as_object()
        .unwrap()
        .values()
        .all(|f| f == true));

    // on M2 ad_{e12} also moves e12 and e21
    let ad_m2 = write(
        &dir,
        "ad_m2.json",
        r#"{"columns": [
            {"i": "1", "j": "1", "image": {"entries": [{"from": "1", "to": "2", "value": "-1"}]}},
            {"i": "2", "j": "2", "image": {"entries": [{"from": "1", "to": "2", "value": "1"}]}},
            {"i": "2", "j": "1", "image": {"entries": [
                {"from": "1", "to": "1", "value": "1"}, {"from": "2", "to": "2", "value": "-1"}]}}
        ]}"#,
    );
    let out = incidence(&[
        "decompose",
        "--poset",
        s(&m2),
        "--operator",
        s(&ad_m2),
        "--method",
        "diagonal",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verified"]["d_is_derivation"], false);
    let out = incidence(&["decompose", "--poset", s(&m2), "--operator", s(&ad_m2)]);
    assert_eq!(out.status.code(), Some(0));

    let not_lie = write(
        &dir,
        "bad.json",
        r#"{"columns": [{"i": "1", "j": "1", "image": {"entries": [{"from": "1", "to": "2", "value": "1/2"}]}}]}"#,
    );
    let out = incidence(&["decompose", "--poset", s(&t2), "--operator", s(&not_lie)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn audit_on_two_cycle() {
    let dir = TempDir::new().unwrap();
    let m2 = write(&dir, "m2.json", M2);
    let out = incidence(&[
        "audit",
        "--poset",
        s(&m2),
        "--ring",
        "Q",
        "--trials",
        "100",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["ring"], "Q");
    assert_eq!(v["seed"], 7);
    let lemma = |name: &str| {
        v["lemmas"]
            .as_array()
            .unwrap()
            .iter()
            .find(|l| l["name"] == name)
            .unwrap()
            .clone()
    };
    assert!(lemma("diagonal_constancy")["fail"].as_u64().unwrap() > 0);
    assert!(!lemma("diagonal_constancy")["counterexample"].is_null());
    assert!(lemma("decomposition_by_diagonal")["fail"].as_u64().unwrap() > 0);
    assert_eq!(lemma("decomposition_by_coefficients")["fail"], 0);
    assert_eq!(lemma("oracle_equivalence")["fail"], 0);
}

#[test]
fn enumerate_streams_json_lines() {
    let out = incidence(&["enumerate", "--n", "3", "--connected-only"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 19);
    assert_eq!(
        incidence(&["enumerate", "--n", "3"])
            .stdout
            .split(|&b| b == b'\n')
            .count()
            - 1,
        29
    );
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["elements"].as_array().unwrap().len(), 3);
    }
    assert_eq!(incidence(&["enumerate", "--n", "9"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(incidence(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(incidence(&["basis"]).status.code(), Some(1));
    assert_eq!(
        incidence(&["basis", "--poset", "/nonexistent/p.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(incidence(&["--help"]).status.code(), Some(0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "chain3.json", CHAIN3);
    let args = [
        "audit",
        "--poset",
        s(&p),
        "--ring",
        "Z/5",
        "--trials",
        "30",
        "--seed",
        "11",
    ];
    assert_eq!(incidence(&args).stdout, incidence(&args).stdout);
    let other = incidence(&[
        "audit",
        "--poset",
        s(&p),
        "--ring",
        "Z/5",
        "--trials",
        "30",
        "--seed",
        "12",
    ]);
    assert_eq!(other.status.code(), Some(0));
}
