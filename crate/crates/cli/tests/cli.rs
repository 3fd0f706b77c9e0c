//! End-to-end checks of the command line surface: flags, exit codes,
//! output formats, and worker-count determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metacyclic"))
        .args(args)
        .env_remove("METACYCLIC_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn exponent_example() {
    let out = run(&["exponent", "--n", "4", "--m", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("exponent"));
    assert!(text.contains('8'), "H(4,1) has exponent 8: {text}");
}

#[test]
fn harborth_grid_agrees() {
    let out = run(&["harborth", "--n", "2..5", "--m", "all", "--method", "both"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.lines().count() > 10);
    assert!(!text.contains("false"));
}

#[test]
fn json_output_is_versioned() {
    let out = run(&["count-failing", "--n", "4", "--m", "2", "--verify", "--output", "json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "count-failing");
    assert_eq!(doc["rows"][0]["formula"], "51");
    assert_eq!(doc["rows"][0]["enumerated"], 51);
    assert_eq!(doc["rows"][0]["agree"], true);
}

#[test]
fn lemma_csv_has_the_documented_columns() {
    let out = run(&["lemma-check", "--n", "3", "--m", "0", "--output", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "n,m,t,alphas,bound,achieved,predicted_equality,actual_equality,equality_form_ok"
    );
    // 2^3 exponent sets
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn output_is_identical_across_worker_counts() {
    let one = run(&["harborth", "--n", "2..6", "--m", "all", "--workers", "1", "--output", "json"]);
    let two = run(&["harborth", "--n", "2..6", "--m", "all", "--workers", "2", "--output", "json"]);
    assert_eq!(code(&one), 0);
    assert_eq!(code(&two), 0);
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = std::env::temp_dir().join("metacyclic-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let out = run(&[
        "exponent", "--n", "2..4", "--m", "even", "--output", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("n,m,order,exponent"));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn verify_claims_filter() {
    let out = run(&["verify-claims", "--only", "dihedral_value_", "--output", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    // n = 3..8, all pass
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")));
}

#[test]
fn verify_claims_reports_refutation_as_finding() {
    let out = run(&["verify-claims", "--only", "egz_conjecture_n4_m2", "--output", "csv"]);
    assert_eq!(code(&out), 0, "findings are data, not failures");
    assert!(stdout(&out).contains("finding"));
}

#[test]
fn egz_cyclic_group_value() {
    let out = run(&["egz", "--n", "2", "--m", "1", "--output", "csv"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().nth(1).unwrap().starts_with("2,1,4,7,7,"));
}

#[test]
fn invalid_input_exits_3() {
    for args in [
        &["harborth"][..],
        &["harborth", "--n", "1", "--m", "0"],
        &["harborth", "--n", "4", "--m", "nope"],
        &["harborth", "--n", "4..2"],
        &["harborth", "--n", "4", "--workers", "0"],
        &["harborth", "--n", "4", "--budget", "0"],
        &["count-failing", "--n", "5", "--m", "1"],
        &["classify", "--n", "4..6", "--m", "all", "--subset", "x^0"],
        &["no-such-command"],
        &["harborth", "--n", "4", "--no-such-flag"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 3, "args {args:?} must exit 3");
    }
}

#[test]
fn budget_exhaustion_exits_2() {
    let out = run(&["harborth", "--n", "10", "--m", "0", "--method", "brute", "--budget", "100"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn wildcard_grids_skip_unsupported_cells() {
    let out = run(&["count-failing", "--n", "2..5", "--m", "all"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    // only the even/even cells survive
    assert_eq!(text.lines().count(), 4);
    assert!(!text.contains("\n3") && !text.contains("\n5"));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["egz", "--help"])), 0);
}
