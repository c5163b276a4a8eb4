mod common;

use std::collections::BTreeMap;

use common::*;
use flowmut_core::mutation::{generate_mutants, reduce_mutants, Mutant, MutationOperatorId};

fn observed(ms: &[Mutant]) -> Vec<Expected> {
    ms.iter()
        .map(|m| Expected {
            id: m.id,
            operator: m.operator.to_string(),
            sites: m.sites.clone(),
            variant: m.variant.clone(),
            removed_by: m.removed_by().map(|r| r.to_string()),
        })
        .collect()
}

fn counts(ms: &[Mutant]) -> BTreeMap<MutationOperatorId, usize> {
    let mut c = BTreeMap::new();
    for m in ms {
        *c.entry(m.operator).or_default() += 1;
    }
    c
}

fn check_golden(file: &str, name: &str, golden: &str) {
    let g = program(file, name);
    let ms = reduce_mutants(generate_mutants(&g, &all_ops()), &g, &all_rules(), &all_ops());
    assert_eq!(observed(&ms), golden_mutants(golden));
}

#[test]
fn word_count_matches_hand_enumeration() {
    check_golden("word_count.dflow", "word_count", "word_count_mutants.txt");
}

#[test]
fn log_analysis_matches_hand_enumeration() {
    check_golden("log_analysis.dflow", "log_analysis", "log_analysis_mutants.txt");
}

#[test]
fn set_ops_match_hand_enumeration() {
    check_golden("set_ops.dflow", "subtract", "subtract_mutants.txt");
    check_golden("set_ops.dflow", "union", "union_mutants.txt");
}

#[test]
fn word_count_per_operator_counts() {
    use MutationOperatorId::*;
    let g = program("word_count.dflow", "word_count");
    let c = counts(&generate_mutants(&g, &all_ops()));
    assert_eq!(c, BTreeMap::from([(UTD, 2), (MTR, 10), (DTI, 3), (ATR, 5)]));
}

#[test]
fn log_analysis_per_operator_counts() {
    use MutationOperatorId::*;
    let g = program("log_analysis.dflow", "log_analysis");
    let c = counts(&generate_mutants(&g, &all_ops()));
    let expected = BTreeMap::from([(UTS, 3), (UTR, 6), (UTD, 3), (MTR, 1), (FTD, 2), (NFTP, 2), (DTI, 3)]);
    assert_eq!(c, expected);
}

#[test]
fn reduction_guards() {
    use MutationOperatorId::*;
    let g = program("log_analysis.dflow", "log_analysis");
    // Without UTD, FTD still subsumes NFTP but nothing removes FTD.
    let ops = [FTD, NFTP, MTR].into_iter().collect();
    let ms = reduce_mutants(generate_mutants(&g, &ops), &g, &all_rules(), &ops);
    let removed: Vec<_> = ms.iter().filter_map(|m| m.removed_by().map(|r| (m.operator, r.to_string()))).collect();
    assert_eq!(
        removed,
        vec![(MTR, "MTRR".to_string()), (NFTP, "FTDS".to_string()), (NFTP, "FTDS".to_string())]
    );
    // With neither UTD nor FTD, NFTP survives reduction.
    let ops = [NFTP].into_iter().collect();
    let ms = reduce_mutants(generate_mutants(&g, &ops), &g, &all_rules(), &ops);
    assert!(ms.iter().all(|m| !m.is_removed()));
}

#[test]
fn reduction_is_monotone_in_rules() {
    let rules: Vec<_> = all_rules().into_iter().collect();
    for g in all_programs() {
        let ms = generate_mutants(&g, &all_ops());
        for mask in 0u32..(1 << rules.len()) {
            let subset = rules.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, r)| *r).collect();
            let reduced = reduce_mutants(ms.clone(), &g, &subset, &all_ops());
            let full = reduce_mutants(ms.clone(), &g, &all_rules(), &all_ops());
            for (a, b) in reduced.iter().zip(&full) {
                if let Some(r) = a.removed_by() {
                    assert_eq!(b.removed_by(), Some(r));
                    assert!(subset.contains(&r));
                }
            }
        }
    }
}

#[test]
fn generation_is_reproducible() {
    for g in all_programs() {
        let a = generate_mutants(&g, &all_ops());
        let b = generate_mutants(&g, &all_ops());
        assert_eq!(a, b);
        assert!(a.iter().enumerate().all(|(i, m)| m.id as usize == i + 1));
    }
}
