use std::process::{Command, Output};

use chain_core::report::Status;
use chain_core::suite::{parse_json_lines, run_suite, SuiteConfig};

fn chaincheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaincheck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, String) {
    let mut all = args.to_vec();
    all.extend(["--format", "json-lines"]);
    let out = chaincheck(&all);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn coefficient_grid_passes() {
    let (code, text) = json(&["--suite", "coefficient", "--p", "3,5,7", "--m", "1,2,3"]);
    assert_eq!(code, 0);
    let reports = parse_json_lines(&text).unwrap();
    assert_eq!(reports.len(), 9);
    assert!(reports
        .iter()
        .all(|r| r.status == Status::Pass && r.citation.contains("Lemma 8.2")));
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let args = [
        "--suite",
        "forms",
        "--suite",
        "moves",
        "--p",
        "3",
        "--r",
        "1,2",
        "--seed",
        "7",
        "--samples",
        "20",
    ];
    let (code, a) = json(&args);
    let (_, b) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let reports = parse_json_lines(&a).unwrap();
    let mut again = String::new();
    for r in &reports {
        again.push_str(&serde_json::to_string(r).unwrap());
        again.push('\n');
    }
    assert_eq!(again, a);
    assert!(reports.iter().all(|r| r.runtime_ms.is_none()));
}

#[test]
fn oversized_chow_is_skipped() {
    let (code, text) = json(&["--suite", "chow", "--p", "7", "--n", "2"]);
    assert_eq!(code, 0);
    let reports = parse_json_lines(&text).unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().any(|r| r.status == Status::SkippedCapacity));
    assert!(reports.iter().all(|r| r.status != Status::Fail));
}

#[test]
fn failing_checks_set_exit_code() {
    let (code, text) = json(&["--suite", "algebra", "--p", "9", "--r", "1"]);
    assert_eq!(code, 1);
    assert!(parse_json_lines(&text)
        .unwrap()
        .iter()
        .any(|r| r.status == Status::Fail));
}

#[test]
fn usage_errors() {
    assert_eq!(chaincheck(&["--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(chaincheck(&["--p", "x"]).status.code(), Some(2));
    assert_eq!(chaincheck(&["--format", "xml"]).status.code(), Some(2));
}

#[test]
fn table_and_file_output() {
    let dir = std::env::temp_dir().join(format!("chaincheck-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dims.jsonl");
    let out = chaincheck(&[
        "--suite",
        "dims",
        "--out",
        path.to_str().unwrap(),
        "--format",
        "json-lines",
        "--timings",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let reports = parse_json_lines(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(reports.len(), 6);
    assert!(reports.iter().all(|r| r.runtime_ms.is_some()));
    std::fs::remove_dir_all(&dir).unwrap();

    let table =
        String::from_utf8(chaincheck(&["--suite", "dims", "--n", "2", "--r", "1"]).stdout).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("status"));
    assert!(lines[1].starts_with("pass"));
}

#[test]
fn empty_suite_list_is_empty() {
    let config = SuiteConfig {
        suites: vec![],
        ..SuiteConfig::default()
    };
    assert!(run_suite(&config).unwrap().is_empty());
    let unknown = SuiteConfig {
        suites: vec!["bogus".into()],
        ..SuiteConfig::default()
    };
    assert!(run_suite(&unknown).is_err());
}
