//! Black-box tests of the `genus2` binary: flag handling, exit codes, and
//! output formats.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genus2"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn rank_reports_certified_bounds() {
    let out = run(&["rank", "D1 D2 D3^-1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("beta1:  2"));
    assert!(text.contains("lower 2  upper 2  status exact"));
}

#[test]
fn rank_accepts_unquoted_words_and_flags_after() {
    let out = run(&["rank", "D1", "D2", "D3^-1", "--fiber", "punctured"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("fiber:  punctured"));
}

#[test]
fn rank_of_empty_word_is_the_product_bundle() {
    let out = run(&["rank", ""]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("beta1:  5"));
    assert!(text.contains("lower 5  upper 5"));
}

#[test]
fn rank_rejects_bad_tokens_quoting_them() {
    let out = run(&["rank", "D9 D1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`D9`"));

    let out = run(&["rank", "D2^0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`D2^0`"));
}

#[test]
fn rank_emits_presentation_and_trace_json() {
    let out = run(&["rank", "D1 D2", "--emit-presentation", "--emit-trace"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["word"], "D1 D2");
    assert_eq!(doc["presentation"]["generators"][4], "t");
    assert!(doc["trace"]["steps"].is_array());
    assert_eq!(doc["certificate"]["status"], "exact");
}

#[test]
fn family_certifies_a_window() {
    let out = run(&["family", "--eps", "1,-1,1,1", "--n-range", "-3..3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().all(|l| l.contains("status=exact")));
}

#[test]
fn family_rejects_bad_eps_and_range() {
    let out = run(&["family", "--eps", "1,2,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["family", "--eps", "1,1,1", "--n-range", "0..1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["family", "--eps", "1,1,1,1", "--n-range", "5..1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table1_passes_and_writes_recomputed_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("recomputed.csv");
    let out = run(&["table1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 mismatch(es)"));
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.starts_with("word,rank_closed,beta1_closed,rank_punctured,beta1_punctured"));
    assert_eq!(content.lines().count(), 31);
}

#[test]
fn table1_unwritable_out_is_io_error() {
    let out = run(&["table1", "--out", "/nonexistent-dir/t.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn census_exhaustive_length_one() {
    let out = run(&["census", "--max-len", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "word,fiber,beta1,torsion,rank_lower,rank_upper,rank_status");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("D1,"));
    assert!(lines[2].starts_with("D2,"));
    assert!(lines[3].starts_with("D3,"));
}

#[test]
fn census_rejects_oversized_enumeration() {
    let out = run(&["census", "--max-len", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn census_random_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&[
            "census", "--random", "300", "--seed", "3", "--max-len", "10", "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn census_jsonl_lines_parse() {
    let out = run(&["census", "--random", "25", "--seed", "4", "--max-len", "6", "--format", "jsonl"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 25);
    for line in text.lines() {
        let doc: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(doc["beta1"].as_u64().unwrap() >= 1);
        assert!(doc["rank_lower"].as_u64().unwrap() <= doc["rank_upper"].as_u64().unwrap());
    }
}

#[test]
fn census_unwritable_out_is_io_error() {
    assert!(!Path::new("/nonexistent-dir").exists());
    let out = run(&["census", "--max-len", "1", "--out", "/nonexistent-dir/c.csv"]);
    assert_eq!(out.status.code(), Some(3));
}
