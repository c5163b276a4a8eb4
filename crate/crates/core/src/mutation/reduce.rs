use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{GraphPatch, Mutant, MutantStatus, MutationOperatorId, ReductionRuleId};
use crate::model::{AggReplacement, MappingValue, ProgramGraph, TransformationKind, UdfWrapper};

fn rule_for(
    m: &Mutant,
    graph: &ProgramGraph,
    rules: &BTreeSet<ReductionRuleId>,
    ops: &BTreeSet<MutationOperatorId>,
) -> Option<ReductionRuleId> {
    use MutationOperatorId as O;
    use ReductionRuleId as R;
    let on = |r: R| rules.contains(&r);
    let enabled = |o: O| ops.contains(&o);
    match (m.operator, &m.patch) {
        (O::FTD | O::DTD | O::OTD, _) if on(R::UTDE) && enabled(O::UTD) => Some(R::UTDE),
        (O::NFTP, _) if on(R::FTDS) && (enabled(O::FTD) || enabled(O::UTD)) => Some(R::FTDS),
        (O::OTI, _) if on(R::OTDS) && (enabled(O::OTD) || enabled(O::UTD)) => Some(R::OTDS),
        (O::MTR, GraphPatch::WrapUdf { wrapper: UdfWrapper::MapResult(mv), .. }) if on(R::MTRR) => {
            use MappingValue::*;
            matches!(mv.innermost(), NumMax | NumMin | StrEmpty | ListReverse | NullValue).then_some(R::MTRR)
        }
        (O::DTI, GraphPatch::InsertAfter { site, .. }) if on(R::DTIE) => {
            let kind = graph.site(*site).map(|t| t.kind());
            matches!(kind, Some(TransformationKind::GroupByKey | TransformationKind::ReduceByKey)).then_some(R::DTIE)
        }
        (O::ATR, GraphPatch::WrapUdf { wrapper: UdfWrapper::AggReplace(AggReplacement::Swapped), .. })
            if on(R::ATRC) =>
        {
            Some(R::ATRC)
        }
        _ => None,
    }
}

/// Marks mutants removed by the enabled reduction rules. `ops` is the
/// operator set the mutants were generated with; several rules only fire
/// when a subsuming operator was also applied.
pub fn reduce_mutants(
    mut mutants: Vec<Mutant>,
    graph: &ProgramGraph,
    rules: &BTreeSet<ReductionRuleId>,
    ops: &BTreeSet<MutationOperatorId>,
) -> Vec<Mutant> {
    for m in &mut mutants {
        if let Some(rule) = rule_for(m, graph, rules, ops) {
            m.status = MutantStatus::Removed(rule);
        }
    }
    mutants
}
