mod common;

use common::*;
use serde_json::json;

const REPORT: &str = "out/report.json";

#[test]
fn full_suite_kills_every_non_equivalent_mutant() {
    let p = word_count_project(&["word_count.json"], &[9]);
    let run = p.flowmut(&["run"]);
    assert_eq!(run.code, 0, "{run:?}");
    let r = p.report(REPORT);
    let s = &r.mutation_score;
    assert_eq!((s.killed, s.total, s.equivalent, s.removed), (13, 14, 1, 6));
    assert_eq!(s.ms, Some(1.0));
    for m in &r.mutants {
        let want = match m.id {
            5 | 7 | 10 | 11 | 15 | 20 => "removed",
            9 => "equivalent",
            _ => "killed",
        };
        assert_eq!(m.status, want, "mutant {}", m.id);
    }
    let html = std::fs::read_to_string(p.path("out/report.html")).unwrap();
    assert!(html.contains("<td>1.00</td>"));
}

#[test]
fn dropping_a_test_leaves_survivors() {
    let p = word_count_project(&["word_count_test1.json"], &[9]);
    assert_eq!(p.flowmut(&["run"]).code, 0);
    let r = p.report(REPORT);
    let survivors: Vec<u32> = r.mutants.iter().filter(|m| m.status == "survived").map(|m| m.id).collect();
    // f(x, x) and f(y, y) agree with x + y whenever every word occurs twice.
    assert_eq!(survivors, vec![18, 19]);
    assert_eq!(r.mutation_score.ms, Some(11.0 / 13.0));
}

#[test]
fn unknown_program_is_a_config_error() {
    let p = word_count_project(&["word_count.json"], &[]);
    p.config(json!({"sources": ["word_count.dflow"], "programs": ["wordcount"]}));
    let run = p.flowmut(&["run"]);
    assert_eq!(run.code, 2, "{run:?}");
    assert!(run.stderr.contains("wordcount"));
}

#[test]
fn parse_errors_exit_2_with_location() {
    let p = Project::new();
    p.write("bad.dflow", "program p\ninput a: list<int>\nb = a.map(x -> x +)\noutput b\n");
    p.config(json!({"sources": ["bad.dflow"]}));
    let run = p.flowmut(&["run"]);
    assert_eq!(run.code, 2, "{run:?}");
    assert!(run.stderr.contains("bad.dflow:3:"), "{run:?}");
}

#[test]
fn failing_original_stops_before_mutants() {
    let p = word_count_project(&[], &[]);
    p.write(
        "wrong.json",
        r#"{"program": "word_count", "tests": [{"name": "wrong", "inputs": {"lines": ["a b", "b"]}, "expect": [{"output": "counts", "values": [["a", 2]]}]}]}"#,
    );
    p.config(json!({"sources": ["word_count.dflow"], "tests": ["wrong.json"], "out-dir": "out"}));
    let run = p.flowmut(&["run"]);
    assert_eq!(run.code, 1, "{run:?}");
    assert!(run.stderr.contains("wrong"));
    assert!(!p.path(REPORT).exists());
}

#[test]
fn empty_suite_leaves_everything_alive() {
    let p = word_count_project(&[], &[]);
    assert_eq!(p.flowmut(&["run"]).code, 0);
    let r = p.report(REPORT);
    assert!(r.mutants.iter().filter(|m| m.status != "removed").all(|m| m.status == "survived" && m.verdicts.is_empty()));
    assert_eq!(r.mutation_score.ms, Some(0.0));
    assert!(r.operators.iter().all(|o| o.killed_ratio.is_none()));
}

#[test]
fn program_without_transformations_has_no_mutants() {
    let p = Project::new();
    p.write("id.dflow", "program p\ninput a: list<int>\noutput a\n");
    p.write("t.json", r#"{"program": "p", "tests": [{"name": "t", "inputs": {"a": [1]}, "expect": [{"output": "a", "values": [1]}]}]}"#);
    p.config(json!({"sources": ["id.dflow"], "tests": ["t.json"], "out-dir": "out"}));
    assert_eq!(p.flowmut(&["run"]).code, 0);
    let text = p.report_text(REPORT);
    let r = p.report(REPORT);
    assert!(r.mutants.is_empty());
    assert_eq!(r.mutation_score.ms, None);
    assert!(text.contains("\"ms\": null"));
    assert!(std::fs::read_to_string(p.path("out/report.html")).unwrap().contains("no mutants"));
}

#[test]
fn short_circuit_changes_executions_only() {
    let p = word_count_project(&["word_count.json"], &[9]);
    assert_eq!(p.flowmut(&["run"]).code, 0);
    let full = p.report(REPORT);
    let mut cfg: serde_json::Value = serde_json::from_str(&p.report_text("flowmut.json")).unwrap();
    cfg["short-circuit"] = json!(true);
    p.config(cfg);
    assert_eq!(p.flowmut(&["run"]).code, 0);
    let short = p.report(REPORT);
    assert_eq!(statuses(&full), statuses(&short));
    let runs = |r: &flowmut::report::Report| r.mutants.iter().map(|m| m.verdicts.len()).sum::<usize>();
    assert!(runs(&short) < runs(&full));
}

#[test]
fn forced_mutants_run_despite_removal() {
    let p = word_count_project(&["word_count.json"], &[9]);
    let run = p.flowmut(&["run", "--force-mutants", "5,20"]);
    assert_eq!(run.code, 0, "{run:?}");
    let r = p.report(REPORT);
    let m5 = r.mutants.iter().find(|m| m.id == 5).unwrap();
    // Reversing the words of a line does not change their counts.
    assert_eq!((m5.status.as_str(), m5.removed_by.as_deref()), ("survived", Some("MTRR")));
    assert_eq!(m5.verdicts.len(), 2);
    assert_eq!(r.mutants.iter().find(|m| m.id == 20).unwrap().status, "survived");
    assert_eq!(r.mutation_score.removed, 4);
}

#[test]
fn exec_prints_outputs_and_verdicts() {
    let p = word_count_project(&["word_count.json"], &[9]);
    let run = p.flowmut(&["exec", "--test", "test1"]);
    assert_eq!(run.code, 0, "{run:?}");
    assert!(run.stdout.contains("counts = [(\"a\", 1), (\"b\", 2)]"), "{run:?}");
    assert!(run.stdout.contains("PASS"));

    let run = p.flowmut(&["exec", "--mutant", "18", "--test", "test2"]);
    assert_eq!(run.code, 0, "{run:?}");
    assert!(run.stdout.contains("+ counts = pairs.reduceByKey((a, b) -> a + a)"), "{run:?}");
    assert!(run.stdout.contains("counts = [(\"c\", 4)]"));
    assert!(run.stdout.contains("FAIL"));

    let run = p.flowmut(&["exec", "--mutant", "15"]);
    assert_eq!(run.code, 0);
    assert!(run.stderr.contains("warning: mutant 15 was removed by DTIE"), "{run:?}");

    assert_eq!(p.flowmut(&["exec", "--test", "nope"]).code, 2);
    assert_eq!(p.flowmut(&["exec", "--mutant", "21"]).code, 2);
}

#[test]
fn alive_without_previous_report_exits_3() {
    let p = word_count_project(&["word_count.json"], &[9]);
    let run = p.flowmut(&["alive"]);
    assert_eq!(run.code, 3, "{run:?}");
}

#[test]
fn alive_refuses_changed_sources_and_operators() {
    let p = word_count_project(&["word_count_test1.json"], &[9]);
    assert_eq!(p.flowmut(&["run"]).code, 0);
    let original = p.report_text("word_count.dflow");
    p.write("word_count.dflow", &original.replace("split(l, \" \")", "split(l, \"-\")"));
    assert_eq!(p.flowmut(&["alive"]).code, 3);
    p.write("word_count.dflow", &original);
    assert_eq!(p.flowmut(&["alive"]).code, 0);

    let mut cfg: serde_json::Value = serde_json::from_str(&p.report_text("flowmut.json")).unwrap();
    cfg["operators"] = json!(["MTR", "ATR"]);
    p.config(cfg);
    assert_eq!(p.flowmut(&["alive"]).code, 3);
}

#[test]
fn alive_with_unchanged_inputs_changes_nothing() {
    let p = word_count_project(&["word_count_test1.json"], &[9]);
    assert_eq!(p.flowmut(&["run"]).code, 0);
    let before = p.report(REPORT);
    let run = p.flowmut(&["alive"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("(2 re-executed)"), "{run:?}");
    assert_eq!(p.report(REPORT).to_json_without_timings(), before.to_json_without_timings());
}

#[test]
fn alive_tagging_every_survivor_scores_one() {
    let p = word_count_project(&["word_count_test1.json"], &[9]);
    assert_eq!(p.flowmut(&["run"]).code, 0);
    let mut cfg: serde_json::Value = serde_json::from_str(&p.report_text("flowmut.json")).unwrap();
    cfg["equivalent-mutants"] = json!([9, 18, 19]);
    p.config(cfg);
    let run = p.flowmut(&["alive"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("(0 re-executed)"), "{run:?}");
    let r = p.report(REPORT);
    assert_eq!(r.mutation_score.ms, Some(1.0));
    assert_eq!(r.mutation_score.equivalent, 3);
}

#[test]
fn several_programs_report_into_subdirectories() {
    let p = Project::new();
    p.copy_fixture("programs/set_ops.dflow", "set_ops.dflow");
    p.write(
        "t.json",
        r#"{"program": "subtract", "tests": [{"name": "t", "inputs": {"rdd1": [1, 2, 2, 3], "rdd2": [2, 4]}, "expect": [{"output": "rdd3", "values": [1, 3]}]}]}"#,
    );
    p.config(json!({"sources": ["set_ops.dflow"], "tests": ["t.json"], "out-dir": "out", "equivalent-mutants": {"union": [1]}}));
    let run = p.flowmut(&["run"]);
    assert_eq!(run.code, 0, "{run:?}");
    assert_eq!(p.report("out/subtract/report.json").mutants.len(), 6);
    let u = p.report("out/union/report.json");
    assert_eq!(u.mutants[0].status, "equivalent");
    assert_eq!(u.mutants.len(), 5);

    let run = p.flowmut(&["run", "--program", "union", "--out", "solo"]);
    assert_eq!(run.code, 0, "{run:?}");
    assert!(p.path("solo/union/report.json").exists());

    p.config(json!({"sources": ["set_ops.dflow"], "equivalent-mutants": [1]}));
    assert_eq!(p.flowmut(&["run"]).code, 2);
}

#[test]
fn report_json_is_canonical() {
    let p = word_count_project(&["word_count.json"], &[9]);
    assert_eq!(p.flowmut(&["run"]).code, 0);
    let text = p.report_text(REPORT);
    let keys: Vec<&str> = text.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
    assert_eq!(keys, ["tool_version", "source_hash", "program", "mutation_score", "operators", "mutants", "timings"]);
    assert_eq!(flowmut::report::Report::parse(&text).unwrap().to_json(), text);
}

#[test]
fn reruns_are_identical_for_any_worker_count() {
    let p = word_count_project(&["word_count.json"], &[9]);
    let mut seen = Vec::new();
    for workers in ["1", "4", "1", "4"] {
        assert_eq!(p.flowmut(&["run", "--workers", workers]).code, 0);
        seen.push(p.report(REPORT).to_json_without_timings());
    }
    assert!(seen.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(p.flowmut(&["run", "--workers", "0"]).code, 2);
}
