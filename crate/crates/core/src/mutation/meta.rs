use alloc::borrow::Cow;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{apply_patch, GraphPatch, Mutant, PatchError};
use crate::interp::{execute_switched, DatasetInstance, ExecError, Outputs, Step};
use crate::model::{ProgramGraph, Transformation};

/// The original program plus every mutant, runnable with at most one mutant
/// switched on.
#[derive(Debug, Clone)]
pub struct MetaMutant {
    pub original: ProgramGraph,
    pub mutants: Vec<Mutant>,
    index: BTreeMap<u32, usize>,
}

/// Checks that every patch applies cleanly and assembles the meta-mutant.
/// Removed mutants are kept so they can still be forced.
pub fn build_meta_mutant(graph: &ProgramGraph, mutants: Vec<Mutant>) -> Result<MetaMutant, (u32, PatchError)> {
    for m in &mutants {
        apply_patch(graph, &m.patch).map_err(|e| (m.id, e))?;
    }
    let index = mutants.iter().enumerate().map(|(i, m)| (m.id, i)).collect();
    Ok(MetaMutant { original: graph.clone(), mutants, index })
}

fn step_for<'a>(graph: &'a ProgramGraph, patch: &'a GraphPatch, t: &'a Transformation) -> Step<'a> {
    let unchanged = Step::original(t);
    match patch {
        GraphPatch::ReplaceSite { site, replacement } if *site == t.id => {
            Step::Apply { op: Cow::Borrowed(&replacement.op), inputs: &replacement.inputs, then: None }
        }
        GraphPatch::SwapSites { a, b } if *a == t.id || *b == t.id => {
            let other = if *a == t.id { *b } else { *a };
            match graph.site(other) {
                Some(o) => Step::Apply { op: Cow::Borrowed(&o.op), inputs: &t.inputs, then: None },
                None => unchanged,
            }
        }
        GraphPatch::WrapUdf { site, udf_index, wrapper } if *site == t.id => {
            let mut op = t.op.clone();
            if let Some(u) = op.udfs.get_mut(*udf_index) {
                u.wrapper = Some(wrapper.clone());
            }
            Step::Apply { op: Cow::Owned(op), inputs: &t.inputs, then: None }
        }
        GraphPatch::ReplaceJoinWithAdjustment { site, kind, adjustment } if *site == t.id => {
            let mut op = t.op.clone();
            op.kind = *kind;
            op.join_adjustment = adjustment.clone();
            Step::Apply { op: Cow::Owned(op), inputs: &t.inputs, then: None }
        }
        GraphPatch::DeleteSite { site } if *site == t.id => Step::Forward(t.inputs[0]),
        GraphPatch::KeepOperand { site, operand } if *site == t.id => Step::Forward(t.inputs[*operand]),
        GraphPatch::InsertAfter { site, op } if *site == t.id => {
            Step::Apply { op: Cow::Borrowed(&t.op), inputs: &t.inputs, then: Some(op) }
        }
        _ => unchanged,
    }
}

impl MetaMutant {
    pub fn mutant(&self, id: u32) -> Option<&Mutant> {
        self.index.get(&id).map(|&i| &self.mutants[i])
    }

    /// Runs the program with mutant `active` switched on, or the original
    /// when `active` is `None`.
    pub fn execute(&self, inputs: &BTreeMap<String, DatasetInstance>, active: Option<u32>) -> Result<Outputs, ExecError> {
        let Some(id) = active else {
            return execute_switched(&self.original, inputs, &|t| Step::original(t));
        };
        let m = self.mutant(id).ok_or(ExecError::UnknownMutant(id))?;
        let graph = &self.original;
        execute_switched(graph, inputs, &|t| step_for(graph, &m.patch, t))
    }
}
