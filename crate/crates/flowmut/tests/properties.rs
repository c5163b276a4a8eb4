mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::gen;
use common::{oracle_test, program};
use flowmut::report::{Report, Timings};
use flowmut::runner::run_parallel;
use flowmut_core::analysis::{compute_operator_stats, compute_score};
use flowmut_core::harness::{assemble, plan_run, run_mutants, KillMatrix, Outcome, RunOptions, TestCase};
use flowmut_core::mutation::{build_meta_mutant, generate_mutants, reduce_mutants, MetaMutant, MutationOperatorId, ReductionRuleId};
use flowmut_core::ProgramGraph;
use proptest::prelude::*;

fn meta(graph: &ProgramGraph) -> MetaMutant {
    let ops: BTreeSet<_> = MutationOperatorId::ALL.into_iter().collect();
    let rules: BTreeSet<_> = ReductionRuleId::ALL.into_iter().collect();
    let ms = reduce_mutants(generate_mutants(graph, &ops), graph, &rules, &ops);
    build_meta_mutant(graph, ms).unwrap()
}

fn fixture_programs() -> Vec<ProgramGraph> {
    vec![
        program("word_count.dflow", "word_count"),
        program("log_analysis.dflow", "log_analysis"),
        program("orders.dflow", "orders"),
        program("catalog.dflow", "catalog"),
        program("set_ops.dflow", "subtract"),
    ]
}

/// Up to four oracle tests built from random inputs.
fn suite(graph: &ProgramGraph) -> impl Strategy<Value = Vec<TestCase>> {
    let g = graph.clone();
    prop::collection::vec(gen::inputs(graph), 1..5).prop_map(move |all| {
        all.into_iter().enumerate().filter_map(|(i, inputs)| oracle_test(&g, &format!("t{i}"), inputs)).collect()
    })
}

fn outcomes(m: &KillMatrix) -> Vec<(u32, Outcome)> {
    m.rows.iter().map(|r| (r.id, r.outcome)).collect()
}

fn case(graph: ProgramGraph) -> impl Strategy<Value = (ProgramGraph, Vec<TestCase>)> {
    let s = suite(&graph);
    (Just(graph), s)
}

fn any_case() -> impl Strategy<Value = (ProgramGraph, Vec<TestCase>)> {
    let strategies: Vec<_> = fixture_programs().into_iter().map(|g| case(g).boxed()).collect();
    prop::strategy::Union::new(strategies)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn verdicts_do_not_depend_on_worker_count((graph, tests) in any_case(), workers in 2usize..6) {
        let meta = meta(&graph);
        let opts = RunOptions::default();
        let sequential = run_mutants(&meta, &tests, &opts);
        let ids = plan_run(&meta, &opts);
        let parallel = assemble(&meta, &tests, &opts, run_parallel(&meta, &tests, &ids, workers, false));
        prop_assert_eq!(sequential, parallel);
    }

    #[test]
    fn short_circuit_only_changes_executions((graph, tests) in any_case()) {
        let meta = meta(&graph);
        let full = run_mutants(&meta, &tests, &RunOptions::default());
        let short = run_mutants(&meta, &tests, &RunOptions { short_circuit: true, ..RunOptions::default() });
        prop_assert_eq!(outcomes(&full), outcomes(&short));
        for (f, s) in full.rows.iter().zip(&short.rows) {
            prop_assert!(s.executed() <= f.executed());
            prop_assert!(s.killing() <= 1);
        }
    }

    #[test]
    fn redundant_test_copies_do_not_change_the_score((graph, tests) in any_case(), copies in 2usize..4) {
        let meta = meta(&graph);
        let opts = RunOptions::default();
        let once = run_mutants(&meta, &tests, &opts);
        let mut repeated = Vec::new();
        for c in 0..copies {
            repeated.extend(tests.iter().cloned().map(|mut t| { t.name = format!("{}#{c}", t.name); t }));
        }
        let many = run_mutants(&meta, &repeated, &opts);
        prop_assert_eq!(outcomes(&once), outcomes(&many));
        prop_assert_eq!(compute_score(&once).ms, compute_score(&many).ms);
    }

    #[test]
    fn operator_stats_add_up((graph, tests) in any_case(), tagged in prop::collection::btree_set(1u32..30, 0..4)) {
        let meta = meta(&graph);
        let equivalent = tagged.into_iter().filter(|id| meta.mutant(*id).is_some_and(|m| !m.is_removed())).collect();
        let m = run_mutants(&meta, &tests, &RunOptions { equivalent, ..RunOptions::default() });
        let score = compute_score(&m);
        let stats = compute_operator_stats(&m);
        prop_assert_eq!(stats.iter().map(|s| s.generated).sum::<u64>(), m.rows.len() as u64);
        prop_assert_eq!(stats.iter().map(|s| s.equivalent).sum::<u64>(), score.equivalent);
        prop_assert_eq!(stats.iter().map(|s| s.removed).sum::<u64>(), score.removed);
        prop_assert_eq!(score.total + score.removed, m.rows.len() as u64);
        for s in &stats {
            if let Some(kr) = s.killed_ratio_percent() {
                prop_assert!((0.0..=100.0).contains(&kr));
            }
        }
        if let Some(ms) = score.ms_f64() {
            prop_assert!((0.0..=1.0).contains(&ms));
        }
    }

    #[test]
    fn reports_reserialize_byte_for_byte((graph, tests) in any_case(), secs in 0.0f64..100.0) {
        let meta = meta(&graph);
        let m = run_mutants(&meta, &tests, &RunOptions::default());
        let t = Timings { generation_s: secs, execution_s: secs / 3.0, total_s: secs * 1.5 };
        let report = Report::build(&meta, &m, "hash", t);
        let text = report.to_json();
        let parsed = Report::parse(&text).unwrap();
        prop_assert_eq!(parsed.to_json(), text);
        prop_assert_eq!(parsed.to_matrix().unwrap(), m);
    }
}

#[test]
fn every_fixture_program_has_mutants() {
    let counts: BTreeMap<String, usize> = fixture_programs().iter().map(|g| (g.name.clone(), meta(g).mutants.len())).collect();
    assert!(counts.values().all(|&n| n > 0), "{counts:?}");
}
