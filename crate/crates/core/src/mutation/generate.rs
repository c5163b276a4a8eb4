use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{GraphPatch, Mutant, MutantStatus, MutationOperatorId};
use crate::model::validate::site_signature;
use crate::model::{
    AggReplacement, JoinAdjustment, MappingValue, Operation, ProgramGraph, Transformation, TransformationKind,
    UdfWrapper, ValueType,
};

fn at(t: &Transformation) -> String {
    format!("{}@{}", t.kind().dsl_name(), t.id)
}

type Signature = (Vec<ValueType>, ValueType);

fn signatures(graph: &ProgramGraph) -> Vec<Option<Signature>> {
    graph.transformations.iter().map(|t| site_signature(graph, t).ok()).collect()
}

/// Pairs `(i, j)` of sites with the given arity and identical signatures.
/// `ordered` yields both `(i, j)` and `(j, i)`.
fn same_signature_pairs(graph: &ProgramGraph, arity: usize, ordered: bool) -> Vec<(usize, usize)> {
    let sigs = signatures(graph);
    let sites: Vec<usize> = graph.transformations.iter().filter(|t| t.inputs.len() == arity).map(|t| t.id).collect();
    let mut out = Vec::new();
    for &i in &sites {
        for &j in &sites {
            let wanted = if ordered { i != j } else { i < j };
            if wanted && sigs[i].is_some() && sigs[i] == sigs[j] {
                out.push((i, j));
            }
        }
    }
    out
}

fn join_adjustment(kind: TransformationKind, left: &ValueType, right: &ValueType) -> Option<JoinAdjustment> {
    let (left_opt, right_opt) = kind.optional_sides();
    if !left_opt && !right_opt {
        return None;
    }
    let default = |t: &ValueType, on: bool| if on { t.as_pair().map(|(_, v)| v.default_value()) } else { None };
    Some(JoinAdjustment { left_default: default(left, left_opt), right_default: default(right, right_opt) })
}

/// Candidate `(sites, patch, variant, description)` tuples for one operator.
fn candidates(graph: &ProgramGraph, op: MutationOperatorId) -> Vec<(Vec<usize>, GraphPatch, String, String)> {
    use MutationOperatorId::*;
    use TransformationKind as K;
    let ts = &graph.transformations;
    let mut out = Vec::new();
    let mut push = |sites: Vec<usize>, patch: GraphPatch, variant: String, desc: String| {
        out.push((sites, patch, variant, desc))
    };
    match op {
        UTS | BTS => {
            for (a, b) in same_signature_pairs(graph, if op == UTS { 1 } else { 2 }, false) {
                let desc = format!("swap {} and {}", at(&ts[a]), at(&ts[b]));
                push(alloc::vec![a, b], GraphPatch::SwapSites { a, b }, String::from("swap"), desc);
            }
        }
        UTR | BTR => {
            for (i, j) in same_signature_pairs(graph, if op == UTR { 1 } else { 2 }, true) {
                let replacement = Transformation { op: ts[j].op.clone(), ..ts[i].clone() };
                let desc = format!("replace {} with a copy of {}", at(&ts[i]), at(&ts[j]));
                push(alloc::vec![i, j], GraphPatch::ReplaceSite { site: i, replacement }, String::from("copy"), desc);
            }
        }
        UTD => {
            let sigs = signatures(graph);
            for t in ts.iter().filter(|t| t.inputs.len() == 1) {
                if let Some((ins, out)) = &sigs[t.id] {
                    if ins[0] == *out {
                        push(alloc::vec![t.id], GraphPatch::DeleteSite { site: t.id }, String::from("delete"), format!("delete {}", at(t)));
                    }
                }
            }
        }
        MTR => {
            for t in ts.iter().filter(|t| t.kind().is_mapping()) {
                let Some(udf) = t.op.udfs.first() else { continue };
                for m in MappingValue::applicable(udf.result_type()) {
                    let desc = format!("map the result of {} to {m}", at(t));
                    let variant = format!("{m:?}");
                    let patch = GraphPatch::WrapUdf { site: t.id, udf_index: 0, wrapper: UdfWrapper::MapResult(m) };
                    push(alloc::vec![t.id], patch, variant, desc);
                }
            }
        }
        FTD | NFTP => {
            for t in ts.iter().filter(|t| t.kind() == K::Filter) {
                if op == FTD {
                    push(alloc::vec![t.id], GraphPatch::DeleteSite { site: t.id }, String::from("delete"), format!("delete {}", at(t)));
                } else {
                    let patch = GraphPatch::WrapUdf { site: t.id, udf_index: 0, wrapper: UdfWrapper::NegatePredicate };
                    push(alloc::vec![t.id], patch, String::from("negate"), format!("negate the predicate of {}", at(t)));
                }
            }
        }
        STR => {
            for t in ts.iter().filter(|t| t.kind().is_set_op()) {
                for kind in K::SET_OPS.into_iter().filter(|k| *k != t.kind()) {
                    let replacement = Transformation { op: Operation::new(kind), ..t.clone() };
                    let desc = format!("replace {} with {}", at(t), kind.dsl_name());
                    let variant = format!("to:{}", kind.dsl_name());
                    push(alloc::vec![t.id], GraphPatch::ReplaceSite { site: t.id, replacement }, variant, desc);
                }
                for (operand, side) in [(0, "left"), (1, "right")] {
                    let desc = format!("keep only the {side} operand of {}", at(t));
                    let variant = format!("keep-{side}");
                    push(alloc::vec![t.id], GraphPatch::KeepOperand { site: t.id, operand }, variant, desc);
                }
                if t.kind() == K::Subtract {
                    let mut replacement = t.clone();
                    replacement.inputs.reverse();
                    let desc = format!("swap the operands of {}", at(t));
                    let variant = String::from("swap-operands");
                    push(alloc::vec![t.id], GraphPatch::ReplaceSite { site: t.id, replacement }, variant, desc);
                }
            }
        }
        DTI => {
            for t in ts.iter().filter(|t| t.kind() != K::Distinct) {
                let patch = GraphPatch::InsertAfter { site: t.id, op: Operation::new(K::Distinct) };
                push(alloc::vec![t.id], patch, String::from("distinct"), format!("insert distinct after {}", at(t)));
            }
        }
        DTD => {
            for t in ts.iter().filter(|t| t.kind() == K::Distinct) {
                push(alloc::vec![t.id], GraphPatch::DeleteSite { site: t.id }, String::from("delete"), format!("delete {}", at(t)));
            }
        }
        ATR => {
            for t in ts.iter().filter(|t| t.kind() == K::ReduceByKey) {
                for r in AggReplacement::ALL {
                    let desc = format!("replace the aggregation of {} with {r}", at(t));
                    let patch = GraphPatch::WrapUdf { site: t.id, udf_index: 0, wrapper: UdfWrapper::AggReplace(r) };
                    push(alloc::vec![t.id], patch, format!("{r:?}"), desc);
                }
            }
        }
        JTR => {
            for t in ts.iter().filter(|t| t.kind().is_join()) {
                let Ok((ins, _)) = site_signature(graph, t) else { continue };
                for kind in K::JOINS.into_iter().filter(|k| *k != t.kind()) {
                    let adjustment = join_adjustment(kind, &ins[0], &ins[1]);
                    let desc = format!("replace {} with {}", at(t), kind.dsl_name());
                    let variant = format!("to:{}", kind.dsl_name());
                    let patch = GraphPatch::ReplaceJoinWithAdjustment { site: t.id, kind, adjustment };
                    push(alloc::vec![t.id], patch, variant, desc);
                }
            }
        }
        OTD | OTI => {
            for t in ts.iter().filter(|t| t.kind().is_sort()) {
                if op == OTD {
                    push(alloc::vec![t.id], GraphPatch::DeleteSite { site: t.id }, String::from("delete"), format!("delete {}", at(t)));
                } else {
                    let mut replacement = t.clone();
                    replacement.op.ascending = !t.op.ascending;
                    let dir = if replacement.op.ascending { "ascending" } else { "descending" };
                    let desc = format!("make {} {dir}", at(t));
                    let patch = GraphPatch::ReplaceSite { site: t.id, replacement };
                    push(alloc::vec![t.id], patch, String::from("invert"), desc);
                }
            }
        }
    }
    out
}

/// Every mutant of `graph` for the enabled operators, numbered 1..N in
/// canonical order: operator order, then site, then variant.
pub fn generate_mutants(graph: &ProgramGraph, operators: &BTreeSet<MutationOperatorId>) -> Vec<Mutant> {
    let mut mutants = Vec::new();
    for op in MutationOperatorId::ALL.into_iter().filter(|o| operators.contains(o)) {
        for (sites, patch, variant, description) in candidates(graph, op) {
            mutants.push(Mutant {
                id: mutants.len() as u32 + 1,
                operator: op,
                sites,
                patch,
                variant,
                description,
                status: MutantStatus::Generated,
            });
        }
    }
    mutants
}
