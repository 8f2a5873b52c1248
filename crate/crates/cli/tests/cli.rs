use serde_json::Value;
use std::process::{Command, Output};

const PSTAR: &str = "x1 & (x2 | (x3 & x4))";

fn fislab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fislab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = fislab(&all);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    serde_json::from_str(&stdout(&out)).expect("valid json")
}

fn values(doc: &Value, fis: &str) -> Vec<String> {
    doc["scores"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["fis"] == fis)
        .unwrap_or_else(|| panic!("{fis} missing"))["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn explain_lists_explanations_and_duality() {
    let out = fislab(&["explain", "--expr", PSTAR, "--instance", "1,1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("AXps: {1,2} {1,3,4}"), "{text}");
    assert!(text.contains("CXps: {1} {2,3} {2,4}"), "{text}");
    assert!(text.contains("MHS duality: PASS"), "{text}");
}

#[test]
fn label_mismatch_is_a_usage_error() {
    let out = fislab(&[
        "explain",
        "--expr",
        PSTAR,
        "--instance",
        "1,1,1,1",
        "--label",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("label mismatch"));
}

#[test]
fn syntax_error_is_a_usage_error() {
    let out = fislab(&["explain", "--expr", "x1 & (x2", "--instance", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("syntax error"));
}

#[test]
fn explanation_based_scores_match_golden_values() {
    let doc = json(&[
        "score",
        "--expr",
        PSTAR,
        "--instance",
        "1,1,1,1",
        "--fis",
        "D,H,J,A,V",
        "--dual",
    ]);
    assert_eq!(values(&doc, "sv_D"), ["5/12", "1/4", "1/6", "1/6"]);
    assert_eq!(values(&doc, "dual(sv_D)"), ["1/3", "1/3", "1/6", "1/6"]);
    assert_eq!(values(&doc, "sv_H"), ["1", "1/2", "1/2", "1/2"]);
    assert_eq!(values(&doc, "dual(sv_H)"), ["1/3", "2/3", "1/3", "1/3"]);
    assert_eq!(values(&doc, "sv_J"), ["17/6", "3/2", "1/3", "1/3"]);
    assert_eq!(values(&doc, "dual(sv_J)"), ["5", "2", "1/2", "1/2"]);
    assert_eq!(values(&doc, "sv_A"), ["7/20", "7/30", "1/15", "1/15"]);
    assert_eq!(
        values(&doc, "dual(sv_A)"),
        ["17/66", "4/33", "1/22", "1/22"]
    );
    assert_eq!(values(&doc, "sv_V"), ["5/16", "1/4", "1/8", "1/8"]);
    assert_eq!(values(&doc, "dual(sv_V)"), ["1/2", "3/8", "1/4", "1/4"]);
}

#[test]
fn oracle_cross_check_passes() {
    let out = fislab(&[
        "score",
        "--expr",
        PSTAR,
        "--instance",
        "1,1,1,1",
        "--fis",
        "S,E,M",
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for fis in ["sv_S", "sv_E", "sv_M"] {
        assert!(
            text.contains(&format!("oracle check {fis}: PASS")),
            "{text}"
        );
    }
}

#[test]
fn all_scores_on_a_dictator() {
    let doc = json(&[
        "score",
        "--expr",
        "x1",
        "--features",
        "2",
        "--instance",
        "1,0",
        "--fis",
        "all",
    ]);
    let scores = doc["scores"].as_array().unwrap();
    assert_eq!(scores.len(), 12);
    for fis in ["sv_S", "sv_B", "sv_D", "sv_H", "sv_R"] {
        assert_eq!(values(&doc, fis), ["1", "0"], "{fis}");
    }
}

#[test]
fn dual_skips_scores_without_one() {
    let doc = json(&[
        "score",
        "--expr",
        PSTAR,
        "--instance",
        "1,1,1,1",
        "--fis",
        "E,S",
        "--dual",
    ]);
    let labels: Vec<&str> = doc["scores"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["fis"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["sv_E", "sv_S", "dual(sv_S)"]);
    assert_eq!(doc["notes"][0], "sv_E has no dual");
}

#[test]
fn text_and_json_carry_the_same_rationals() {
    let args = [
        "score",
        "--expr",
        PSTAR,
        "--instance",
        "1,1,1,1",
        "--fis",
        "all",
    ];
    let doc = json(&args);
    let text = stdout(&fislab(&args));
    let rows: Vec<Vec<String>> = text
        .lines()
        .skip(2)
        .take(4)
        .map(|line| {
            line.split_whitespace()
                .skip(1)
                .step_by(2)
                .map(str::to_string)
                .collect()
        })
        .collect();
    for (k, score) in doc["scores"].as_array().unwrap().iter().enumerate() {
        for (i, v) in score["values"].as_array().unwrap().iter().enumerate() {
            assert_eq!(
                rows[i][k],
                v.as_str().unwrap(),
                "{} feature {}",
                score["fis"],
                i + 1
            );
        }
    }
}

#[test]
fn identical_runs_give_identical_bytes() {
    for args in [
        &["props", "--budget", "20"][..],
        &[
            "--format", "json", "props", "--search", "P05", "--fis", "E,S", "--budget", "200",
        ][..],
        &["--format", "csv", "repro"][..],
    ] {
        let a = fislab(args);
        let b = fislab(args);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn worker_count_does_not_change_the_report() {
    let one = fislab(&[
        "--workers",
        "1",
        "--format",
        "json",
        "props",
        "--budget",
        "30",
    ]);
    let many = fislab(&["--format", "json", "props", "--budget", "30"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn property_matrix_agrees_with_pinned_cells() {
    let out = fislab(&["props", "--budget", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("All pinned cells agree"));
}

#[test]
fn search_finds_a_p05_witness_against_sv_e() {
    let doc = json(&[
        "props", "--search", "P05", "--fis", "E", "--budget", "10000",
    ]);
    let result = &doc["results"][0];
    assert!(!result["witness"].is_null(), "{doc}");
    assert!(result["index"].as_u64().unwrap() < 10_000);
}

#[test]
fn shapley_and_banzhaf_are_strongly_dual() {
    let doc = json(&["props", "--duality", "--fis", "S,B", "--budget", "100"]);
    for entry in doc["levels"].as_array().unwrap() {
        assert_eq!(entry["counts"]["strong"], 100, "{entry}");
    }
}

#[test]
fn repro_passes() {
    let out = fislab(&["repro"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("sv_D"));
}

#[test]
fn weighted_voting_games() {
    let doc = json(&["wvg", "--quota", "3", "--weights", "2,1,1"]);
    let shapley = &doc["indices"][0];
    assert_eq!(shapley["template"], "TSc_S");
    assert_eq!(shapley["values"], serde_json::json!(["2/3", "1/6", "1/6"]));

    let doc = json(&["wvg", "--quota", "2", "--weights", "1,1,1"]);
    assert_eq!(
        doc["indices"][0]["values"],
        serde_json::json!(["1/3", "1/3", "1/3"])
    );

    let out = fislab(&["wvg", "--quota", "5", "--weights", "2,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("exceeds total weight"));
}
