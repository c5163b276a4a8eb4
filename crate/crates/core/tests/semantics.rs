mod common;

use std::collections::BTreeMap;

use common::{all_ops, all_programs, program};
use flowmut_core::dsl::{format_expr, format_program, parse_lambda, parse_program, parse_source};
use flowmut_core::interp::{execute, DatasetInstance};
use flowmut_core::model::{AggReplacement, UdfWrapper};
use flowmut_core::mutation::{apply_patch, generate_mutants, GraphPatch, MutationOperatorId};
use flowmut_core::{Value, ValueType};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn kv_type() -> ValueType {
    ValueType::pair(ValueType::Str, ValueType::Int)
}

fn run_kv(graph: &flowmut_core::ProgramGraph, input: &str, rows: Vec<Value>, output: &str) -> Vec<Value> {
    let inputs = BTreeMap::from([(input.to_string(), DatasetInstance::new(kv_type(), rows))]);
    execute(graph, &inputs).unwrap().remove(output).unwrap().elements
}

#[test]
fn reduce_by_key_ignores_input_order_for_commutative_udf() {
    let g = parse_program(
        "program p\ninput kv: list<(string, int)>\ns = kv.reduceByKey((a, b) -> a + b)\nm = kv.reduceByKey((a, b) -> if a < b then b else a)\noutput s, m\n",
    )
    .unwrap();
    let rows = prop::collection::vec((prop::sample::select(vec!["a", "b", "c", "d"]), -50i64..50), 0..20);
    let mut runner = TestRunner::new(Config { cases: 20, ..Config::default() });
    runner
        .run(&rows, |rows| {
            let rows: Vec<Value> = rows.into_iter().map(|(k, v)| Value::pair(Value::str(k), Value::Int(v))).collect();
            let mut expected: BTreeMap<String, (i64, i64)> = BTreeMap::new();
            for r in &rows {
                let Value::Pair(k, v) = r else { unreachable!() };
                let (Value::Str(k), Value::Int(v)) = (&**k, &**v) else { unreachable!() };
                let e = expected.entry(k.clone()).or_insert((0, i64::MIN));
                e.0 += v;
                e.1 = e.1.max(*v);
            }
            let sorted = |mut vs: Vec<Value>| {
                vs.sort();
                vs
            };
            let want_sum = expected.iter().map(|(k, (s, _))| Value::pair(Value::str(k.as_str()), Value::Int(*s))).collect::<Vec<_>>();
            let want_max = expected.iter().map(|(k, (_, m))| Value::pair(Value::str(k.as_str()), Value::Int(*m))).collect::<Vec<_>>();
            // 100 shuffles per case.
            let mut shuffled = rows.clone();
            let mut seed = 0x9e37_79b9_7f4a_7c15u64;
            for _ in 0..100 {
                for i in (1..shuffled.len()).rev() {
                    seed ^= seed << 13;
                    seed ^= seed >> 7;
                    seed ^= seed << 17;
                    shuffled.swap(i, (seed % (i as u64 + 1)) as usize);
                }
                prop_assert_eq!(sorted(run_kv(&g, "kv", shuffled.clone(), "s")), want_sum.clone());
                prop_assert_eq!(sorted(run_kv(&g, "kv", shuffled.clone(), "m")), want_max.clone());
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn swapped_aggregation_changes_subtraction_result() {
    let g = program("semantics.dflow", "kinds_unary");
    let mutants = generate_mutants(&g, &[MutationOperatorId::ATR].into_iter().collect());
    let swapped = mutants
        .iter()
        .find(|m| matches!(m.patch, GraphPatch::WrapUdf { wrapper: UdfWrapper::AggReplace(AggReplacement::Swapped), .. }))
        .unwrap();
    let mutated = apply_patch(&g, &swapped.patch).unwrap();
    let kv = vec![
        Value::pair(Value::str("x"), Value::Int(5)),
        Value::pair(Value::str("x"), Value::Int(2)),
        Value::pair(Value::str("x"), Value::Int(1)),
    ];
    let inputs = BTreeMap::from([
        ("nums".to_string(), DatasetInstance::new(ValueType::Int, vec![])),
        ("lines".to_string(), DatasetInstance::new(ValueType::Str, vec![])),
        ("kv".to_string(), DatasetInstance::new(kv_type(), kv)),
    ]);
    let original = execute(&g, &inputs).unwrap().remove("reduced").unwrap().elements;
    let changed = execute(&mutated, &inputs).unwrap().remove("reduced").unwrap().elements;
    // (5 - 2) - 1 against 1 - (2 - 5)
    assert_eq!(original, vec![Value::pair(Value::str("x"), Value::Int(2))]);
    assert_eq!(changed, vec![Value::pair(Value::str("x"), Value::Int(4))]);
}

#[test]
fn fixture_programs_round_trip_through_the_formatter() {
    for g in all_programs() {
        let text = format_program(&g);
        let back = parse_program(&text).unwrap_or_else(|d| panic!("{text}\n{d:?}"));
        assert!(back.same_structure(&g), "{}:\n{text}", g.name);
    }
}

#[test]
fn structural_mutants_round_trip_through_the_formatter() {
    let mut checked = 0;
    for g in all_programs() {
        for m in generate_mutants(&g, &all_ops()) {
            if matches!(m.patch, GraphPatch::WrapUdf { .. } | GraphPatch::ReplaceJoinWithAdjustment { .. }) {
                continue;
            }
            let mutated = apply_patch(&g, &m.patch).unwrap();
            // `output` lines name datasets, so an output forwarded to another
            // dataset has no source form.
            if mutated.outputs.iter().any(|o| mutated.datasets[o.dataset.0].name != o.name) {
                continue;
            }
            let text = format_program(&mutated);
            let back = parse_source(None, &text).unwrap_or_else(|d| panic!("{} #{}:\n{text}\n{d:?}", g.name, m.id));
            assert!(back[0].same_structure(&mutated), "{} #{}:\n{text}", g.name, m.id);
            checked += 1;
        }
    }
    assert!(checked > 50);
}

fn int_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (-20i64..20).prop_map(|n| n.to_string()),
        Just("a".to_string()),
        Just("b".to_string()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "-", "*", "/", "%"]), inner.clone())
                .prop_map(|(l, op, r)| format!("({l} {op} {r})")),
            inner.clone().prop_map(|e| format!("-{e}")),
            (inner.clone(), inner.clone(), inner.clone(), prop::sample::select(vec!["<", "<=", "==", "!="]))
                .prop_map(|(c, t, e, op)| format!("(if {c} {op} {t} then {t} else {e})")),
        ]
    })
}

proptest! {
    #[test]
    fn expressions_round_trip(src in int_expr()) {
        let params = [ValueType::Int, ValueType::Int];
        let lambda = parse_lambda(&format!("(a, b) -> {src}"), &params).unwrap();
        let text = format_expr(&lambda.body);
        let back = parse_lambda(&format!("(a, b) -> {text}"), &params).unwrap();
        prop_assert_eq!(&back.body, &lambda.body, "{} -> {}", src, text);
        prop_assert_eq!(format_expr(&back.body), text);
    }
}

