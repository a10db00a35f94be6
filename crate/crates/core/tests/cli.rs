mod common;

use kla::assembly::ResultRow;
use kla::formal::{parse_concrete, GradedExpr};
use serde_json::Value;

use common::kla;

const COMPANION3: &str = r#"crystZp:{"d":2,"p":3,"rho":[[0,-1],[1,-1]],"split":true}"#;
const NONSPLIT: &str = r#"{"type":"crystZp","d":2,"p":3,"rho":[[0,-1],[1,-1]],"split":false}"#;

fn stdout(args: &[&str]) -> String {
    let out = kla(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn rows(v: &Value) -> Vec<ResultRow> {
    serde_json::from_value(v["rows"].clone()).unwrap()
}

fn concrete(s: &str) -> GradedExpr {
    parse_concrete(s).unwrap()
}

#[test]
fn free_abelian_l_over_z_is_four_periodic() {
    let v = json(&["compute", "--group", "zd:3", "--ring", "Z", "--theory", "L", "--n", "-2..6", "--format", "json"]);
    assert_eq!(v["schema"], "kla.compute/1");
    let rows = rows(&v);
    assert_eq!(rows.len(), 9);
    // sum_i C(3,i) L_{n-i}(Z)
    let by_residue = ["Z + (Z/2)^3", "Z^3 + Z/2", "Z^3 + Z/2", "Z + (Z/2)^3"];
    for row in &rows {
        assert_eq!(row.expr, concrete(by_residue[row.degree.rem_euclid(4) as usize]), "n = {}", row.degree);
        assert_eq!(row.provenance.theorem.id(), "free-abelian");
        assert!(!row.provenance.conditional);
    }
}

#[test]
fn surface_rows_carry_the_discrepancy_note() {
    let v = json(&["compute", "--group", "surface:2", "--ring", "Z", "--theory", "L", "--n", "0..3", "--format", "json"]);
    let rows = rows(&v);
    let expected = ["Z + Z/2", "Z^4", "Z + Z/2", "(Z/2)^4"];
    for (row, e) in rows.iter().zip(expected) {
        assert_eq!(row.expr, concrete(e));
        assert_eq!(row.provenance.notes.is_empty(), row.degree % 2 == 0);
    }
    let text = stdout(&["compute", "--group", "surface:2", "--ring", "Z", "--theory", "L", "--n", "0..3"]);
    assert!(text.contains("n = 1: Z^4"));
    assert!(text.contains("theorem: surface-group"));
    assert!(text.contains("note: "));
}

#[test]
fn emitted_rows_round_trip() {
    for args in [
        &["compute", "--group", "zd:2", "--theory", "K", "--n", "-3..3", "--format", "json"][..],
        &["compute", "--group", "free:2", "--ring", "Z", "--theory", "L", "--n", "0..4", "--format", "json"],
        &["compute", "--group", COMPANION3, "--ring", "Z", "--theory", "Sper", "--n", "0..3", "--format", "json"],
        &["compute", "--group", "tfhyp:1,4,1", "--ring", "regular", "--theory", "K", "--n", "0..2", "--format", "json"],
    ] {
        let v = json(args);
        let parsed = rows(&v);
        assert_eq!(serde_json::to_value(&parsed).unwrap(), v["rows"], "{args:?}");
    }
}

#[test]
fn nonsplit_without_jcard_exits_two() {
    let out = kla(&["compute", "--group", NONSPLIT, "--theory", "Wh", "--ring", "Z"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("|J| is unknown"));
    let out = kla(&["compute", "--group", NONSPLIT, "--theory", "Wh", "--ring", "Z", "--jcard", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| kla(args).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["compute", "--group", "zd:x", "--theory", "K"]), Some(1));
    assert_eq!(code(&["compute", "--group", "zd:2", "--theory", "Q"]), Some(1));
    assert_eq!(code(&["compute", "--group", "zd:2", "--theory", "K", "--ring", "missing.json"]), Some(1));
    assert_eq!(code(&["compute", "--group", "zd:2", "--theory", "K", "--decoration", "s"]), Some(1));
    assert_eq!(code(&["compute", "--group", "zd:2", "--theory", "L", "--ring", "Z", "--decoration", "s"]), Some(2));
    assert_eq!(code(&["compute", "--group", "hyp:micy=omega", "--theory", "Wh"]), Some(2));
    assert_eq!(code(&["compute", "--group", "zd:2", "--theory", "K", "--jcard", "2"]), Some(1));
    let bad_order = r#"crystZp:{"d":2,"p":3,"rho":[[1,1],[0,1]],"split":true}"#;
    assert_eq!(code(&["analyze", "--group", bad_order]), Some(1));
}

#[test]
fn analyze_reports_action_invariants() {
    let v = json(&["analyze", "--group", COMPANION3, "--format", "json"]);
    assert_eq!(v["schema"], "kla.analyze/1");
    assert_eq!(v["analysis"]["e"], 0);
    assert_eq!(v["analysis"]["freeAwayFromZero"], true);
    assert_eq!(v["analysis"]["jCard"]["fin"], 3);

    let identity = r#"crystZp:{"d":2,"p":3,"rho":[[1,0],[0,1]],"split":true}"#;
    let v = json(&["analyze", "--group", identity, "--format", "json"]);
    assert_eq!(v["analysis"]["e"], 2);
    assert_eq!(v["analysis"]["jCard"]["fin"], 1);

    let minus = r#"crystZp:{"d":3,"p":2,"rho":[[-1,0,0],[0,-1,0],[0,0,-1]],"split":true}"#;
    let v = json(&["analyze", "--group", minus, "--format", "json"]);
    assert_eq!(v["analysis"]["jCard"]["fin"], 8);
    assert_eq!(v["analysis"]["jcSize"]["fin"], 4);
    let theorems: Vec<&str> = v["theorems"].as_array().unwrap().iter().map(|t| t.as_str().unwrap()).collect();
    assert!(theorems.contains(&"free-action-l"));

    let text = stdout(&["analyze", "--group", minus]);
    assert!(text.contains("|J| = 8"));
    assert!(text.contains("|J_C| = 4"));
}

#[test]
fn table_of_free_abelian_k_is_pascal() {
    let v = json(&["table", "--family", "zd:0..3", "--ring", "regular", "--theory", "K", "--n", "2", "--format", "json"]);
    assert_eq!(v["schema"], "kla.table/1");
    let cells = v["rows"][0]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 4);
    let expected = [
        "K_2(R)",
        "K_2(R) + K_1(R)",
        "K_2(R) + K_1(R)^2 + K_0(R)",
        "K_2(R) + K_1(R)^3 + K_0(R)^3",
    ];
    let text = stdout(&["table", "--family", "zd:0..3", "--ring", "regular", "--theory", "K", "--n", "2"]);
    for e in expected {
        assert!(text.contains(e), "missing {e} in\n{text}");
    }
}

#[test]
fn empty_family_gives_empty_table() {
    let v = json(&["table", "--family", "zd:3..2", "--theory", "K", "--format", "json"]);
    assert_eq!(v["columns"], serde_json::json!([]));
    assert_eq!(v["rows"], serde_json::json!([]));
}

#[test]
fn table_marks_errors_per_cell() {
    let v = json(&["table", "--family", "surface:0..2", "--ring", "Z", "--theory", "L", "--n", "0..3", "--format", "json"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(v["columns"].as_array().unwrap().len(), 3);

    let text = stdout(&["table", "--family", "zd:0..2", "--ring", "Z", "--theory", "L", "--decoration", "s", "--n", "0"]);
    assert!(text.lines().nth(1).unwrap().contains("ERR"));
}

#[test]
fn oracle_exit_codes() {
    let out = kla(&["oracle", "--quick"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("checks agree"));
    let out = kla(&["oracle", "--quick", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("DISAGREE"));
}

#[test]
fn oracle_bound_from_environment() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_kla"))
        .args(["oracle", "--quick", "--format", "json"])
        .env("KLA_ORACLE_BOUND", "2")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bound"], 2);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn ring_file_is_accepted() {
    let dir = std::env::temp_dir().join(format!("kla-ring-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ring.json");
    std::fs::write(&path, r#"{"name":"F","axioms":["Regular"],"values":{"K":{"0":"Z","1":"Z/6"}}}"#).unwrap();
    let v = json(&["compute", "--group", "zd:1", "--ring", path.to_str().unwrap(), "--theory", "K", "--n", "1", "--format", "json"]);
    assert_eq!(rows(&v)[0].expr, concrete("Z + Z/6"));
}
