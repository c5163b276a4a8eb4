use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{GraphPatch, Mutant};
use crate::dsl::{format_call, format_transformation};
use crate::model::{validate, Dataset, DatasetId, GraphDiagnostic, Operation, ProgramGraph, Transformation};

#[derive(Debug, Clone, PartialEq)]
pub enum PatchError {
    UnknownSite(usize),
    NotApplicable(String),
    Invalid(Vec<GraphDiagnostic>),
}

impl fmt::Display for PatchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatchError::UnknownSite(s) => write!(f, "no transformation with id {s}"),
            PatchError::NotApplicable(m) => f.write_str(m),
            PatchError::Invalid(diags) => {
                f.write_str("patched graph is invalid:")?;
                for d in diags {
                    write!(f, " {d};")?;
                }
                Ok(())
            }
        }
    }
}

fn site_mut(g: &mut ProgramGraph, site: usize) -> Result<&mut Transformation, PatchError> {
    g.transformations.get_mut(site).ok_or(PatchError::UnknownSite(site))
}

/// Rewrites every dataset reference through `f`.
fn remap_datasets(g: &mut ProgramGraph, f: impl Fn(DatasetId) -> DatasetId) {
    for d in &mut g.inputs {
        *d = f(*d);
    }
    for t in &mut g.transformations {
        for d in &mut t.inputs {
            *d = f(*d);
        }
        t.output = f(t.output);
    }
    for o in &mut g.outputs {
        o.dataset = f(o.dataset);
    }
}

fn renumber(g: &mut ProgramGraph) {
    for (i, d) in g.datasets.iter_mut().enumerate() {
        d.id = DatasetId(i);
    }
    for (i, t) in g.transformations.iter_mut().enumerate() {
        t.id = i;
    }
}

/// Removes `site`; whatever read its output now reads `forward`.
fn remove_site(g: &mut ProgramGraph, site: usize, forward: DatasetId) {
    let out = g.transformations.remove(site).output;
    remap_datasets(g, |d| if d == out { forward } else { d });
    g.datasets.remove(out.0);
    remap_datasets(g, |d| if d.0 > out.0 { DatasetId(d.0 - 1) } else { d });
    renumber(g);
}

fn insert_after(g: &mut ProgramGraph, site: usize, op: &Operation) {
    let out = g.transformations[site].output;
    let base = format!("{}_{}", g.datasets[out.0].name, op.kind.dsl_name());
    let mut name = base.clone();
    let mut n = 2;
    while g.dataset_by_name(&name).is_some() {
        name = format!("{base}{n}");
        n += 1;
    }
    let fresh = DatasetId(out.0 + 1);
    remap_datasets(g, |d| if d.0 >= fresh.0 { DatasetId(d.0 + 1) } else { d });
    remap_datasets(g, |d| if d == out { fresh } else { d });
    // The remap above also redirected the site's own output; restore it.
    g.transformations[site].output = out;
    let elem = g.datasets[out.0].elem.clone();
    g.datasets.insert(fresh.0, Dataset { id: fresh, name, elem });
    let span = g.transformations[site].span.clone();
    g.transformations.insert(site + 1, Transformation { id: site + 1, op: op.clone(), inputs: alloc::vec![out], output: fresh, span });
    renumber(g);
}

/// Materializes one mutant as a standalone graph.
pub fn apply_patch(graph: &ProgramGraph, patch: &GraphPatch) -> Result<ProgramGraph, PatchError> {
    let mut g = graph.clone();
    match patch {
        GraphPatch::ReplaceSite { site, replacement } => {
            let t = site_mut(&mut g, *site)?;
            t.op = replacement.op.clone();
            t.inputs = replacement.inputs.clone();
        }
        GraphPatch::SwapSites { a, b } => {
            let op_a = site_mut(&mut g, *a)?.op.clone();
            let op_b = core::mem::replace(&mut site_mut(&mut g, *b)?.op, op_a);
            site_mut(&mut g, *a)?.op = op_b;
        }
        GraphPatch::WrapUdf { site, udf_index, wrapper } => {
            let t = site_mut(&mut g, *site)?;
            let udf = t
                .op
                .udfs
                .get_mut(*udf_index)
                .ok_or_else(|| PatchError::NotApplicable(format!("site {site} has no function {udf_index}")))?;
            udf.wrapper = Some(wrapper.clone());
        }
        GraphPatch::ReplaceJoinWithAdjustment { site, kind, adjustment } => {
            let t = site_mut(&mut g, *site)?;
            t.op.kind = *kind;
            t.op.join_adjustment = adjustment.clone();
        }
        GraphPatch::DeleteSite { site } | GraphPatch::KeepOperand { site, .. } => {
            let operand = match patch {
                GraphPatch::KeepOperand { operand, .. } => *operand,
                _ => 0,
            };
            let t = site_mut(&mut g, *site)?;
            let forward = *t
                .inputs
                .get(operand)
                .ok_or_else(|| PatchError::NotApplicable(format!("site {site} has no operand {operand}")))?;
            remove_site(&mut g, *site, forward);
        }
        GraphPatch::InsertAfter { site, op } => {
            site_mut(&mut g, *site)?;
            insert_after(&mut g, *site, op);
        }
    }
    validate(&g).map_err(PatchError::Invalid)?;
    Ok(g)
}

/// Original and mutated source text of the sites a mutant touches.
pub fn render_mutant(graph: &ProgramGraph, mutant: &Mutant) -> (String, String) {
    let name = |d: DatasetId| graph.dataset(d).map(|d| d.name.as_str()).unwrap_or("?");
    let line = |t: &Transformation, op: &Operation, inputs: &[DatasetId]| {
        let ins: Vec<&str> = inputs.iter().map(|d| name(*d)).collect();
        format!("{} = {}", name(t.output), format_call(op, &ins))
    };
    let sites: Vec<&Transformation> = mutant.patch.sites().iter().filter_map(|s| graph.site(*s)).collect();
    let original = sites.iter().map(|t| format_transformation(graph, t)).collect::<Vec<_>>().join("\n");
    let Some(t) = sites.first().copied() else {
        return (original, String::new());
    };
    let mutated = match &mutant.patch {
        GraphPatch::ReplaceSite { replacement, .. } => line(t, &replacement.op, &replacement.inputs),
        GraphPatch::SwapSites { .. } => match sites.get(1) {
            Some(u) => format!("{}\n{}", line(t, &u.op, &t.inputs), line(u, &t.op, &u.inputs)),
            None => original.clone(),
        },
        GraphPatch::WrapUdf { udf_index, wrapper, .. } => {
            let mut op = t.op.clone();
            if let Some(u) = op.udfs.get_mut(*udf_index) {
                u.wrapper = Some(wrapper.clone());
            }
            line(t, &op, &t.inputs)
        }
        GraphPatch::ReplaceJoinWithAdjustment { kind, adjustment, .. } => {
            let mut op = t.op.clone();
            op.kind = *kind;
            op.join_adjustment = adjustment.clone();
            line(t, &op, &t.inputs)
        }
        GraphPatch::DeleteSite { .. } => format!("{} = {}", name(t.output), name(t.inputs[0])),
        GraphPatch::KeepOperand { operand, .. } => {
            format!("{} = {}", name(t.output), t.inputs.get(*operand).map(|d| name(*d)).unwrap_or("?"))
        }
        GraphPatch::InsertAfter { op, .. } => {
            let call = format_call(op, &["_"]);
            format!("{}{}", line(t, &t.op, &t.inputs), call.trim_start_matches('_'))
        }
    };
    (original, mutated)
}
