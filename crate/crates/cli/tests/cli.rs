//! End-to-end tests driving the compiled binary.

use std::process::{Command, Output};

fn barriers(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_barriers"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn rank_of_schreier_prints_omega() {
    let out = barriers(&["barrier", "rank", "--code", "schreier(1)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("rank: \"w\""));
}

#[test]
fn rank_of_example_prints_omega_plus_one() {
    let code = "glue{tail: cases2[schreierAff(0), uniformAff(1,0)]}";
    let out = barriers(&["barrier", "rank", "--code", code]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("rank: \"w + 1\""));
}

#[test]
fn verify_sperner_pass_and_fail_exit_codes() {
    let example = "glue{tail: cases2[schreierAff(0), uniformAff(1,0)]}";
    let out = barriers(&[
        "barrier",
        "verify-sperner",
        "--code",
        example,
        "--bound",
        "12",
        "--depth",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("pass"));

    let bad = "glue{0: uniform(2); 1: uniform(1); tail: uniformAff(0,1)}";
    let out = barriers(&[
        "barrier",
        "verify-sperner",
        "--code",
        bad,
        "--bound",
        "6",
        "--depth",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("fail"));
}

#[test]
fn usage_error_exits_2() {
    let out = barriers(&["barrier", "rank", "--code", "nonsense("]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fuel_exhaustion_exits_3() {
    // A glue with empty tail branches never covers, so no initial segment
    // is ever found.
    let out = barriers(&[
        "barrier",
        "first-segment",
        "--code",
        "glue{tail: uniformAff(0,0)}",
        "--base",
        "omega",
        "--fuel",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn synthesize_then_verify_round_trip() {
    let dir = std::env::temp_dir().join("barriers-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let witness_path = dir.join("witness.json");
    let witness_arg = format!("@{}", witness_path.display());

    let out = barriers(&[
        "embed",
        "synthesize",
        "--B",
        "schreier(1)",
        "--C",
        "uniform(3)",
        "--steps",
        "6",
        "--bound",
        "24",
        "--depth",
        "6",
        "--format",
        "json",
        "--out",
        witness_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = barriers(&[
        "embed",
        "verify",
        "--B",
        "schreier(1)",
        "--C",
        "uniform(3)",
        "--witness",
        &witness_arg,
        "--bound",
        "24",
        "--depth",
        "6",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "verify failed: {}",
        stdout(&out)
    );
    assert!(stdout(&out).contains("verdict: \"pass\""));
}

#[test]
fn ramsey_search_not_found_exits_1() {
    // Two colors on pairs with a tiny window and an oversized target.
    let out = barriers(&[
        "ramsey",
        "search",
        "--code",
        "uniform(2)",
        "--rule",
        "hash(3)",
        "--target",
        "6",
        "--bound",
        "6",
        "--depth",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = [
        "ideals",
        "shrink",
        "--B",
        "uniform(1)",
        "--C",
        "uniform(2)",
        "--seed",
        "11",
        "--bound",
        "12",
        "--depth",
        "3",
        "--format",
        "json",
    ];
    let first = barriers(&args);
    let second = barriers(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
    // The seed is recorded in the report header.
    assert!(stdout(&first).contains("\"seed\": 11"));
}

#[test]
fn json_reports_parse_and_carry_command() {
    let out = barriers(&[
        "barrier",
        "verify-cover",
        "--code",
        "schreier(1)",
        "--bound",
        "10",
        "--depth",
        "10",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["command"], "barrier verify-cover");
    assert_eq!(value["report"]["verdict"], "pass");
}

#[test]
fn ideals_stage_and_verify_pipeline() {
    let out = barriers(&[
        "ideals",
        "stage",
        "--code",
        "uniform(2)",
        "--base",
        "evens",
        "--bound",
        "16",
        "--depth",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let family = serde_json::to_string(&serde_json::json!([value["report"]["a_new"]])).unwrap();

    let out = barriers(&[
        "ideals",
        "verify",
        "--code",
        "uniform(2)",
        "--family",
        &family,
        "--grid",
        "evens",
        "--bound",
        "16",
        "--depth",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn sets_and_ordinal_helpers() {
    let out = barriers(&[
        "sets",
        "enumerate",
        "--set",
        "[1,4]+from(10)",
        "--count",
        "5",
    ]);
    assert!(stdout(&out).contains("[1,4,10,11,12]"));

    let out = barriers(&["ordinal", "compare", "--a", "w*2", "--b", "w + 3"]);
    assert!(stdout(&out).contains("greater"));

    let out = barriers(&[
        "sets",
        "thin",
        "--set",
        "omega",
        "--breakpoints",
        "2,4,6,8",
        "--parity",
        "even",
        "--bound",
        "10",
        "--depth",
        "10",
    ]);
    assert!(stdout(&out).contains("[2,6]"));
}
