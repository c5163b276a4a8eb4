//! Type-signature rules and whole-graph validation.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::graph::{DatasetId, ProgramGraph, Transformation, TransformationKind};
use super::types::ValueType;

/// Which rule a diagnostic is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    SiteNumbering,
    Arity,
    UdfCount,
    UnknownDataset,
    Signature,
    UdfType,
    DeclaredType,
    SingleProducer,
    Acyclic,
    Outputs,
    UniqueNames,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDiagnostic {
    pub site: Option<usize>,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for GraphDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.site {
            Some(site) => write!(f, "{} at site {site}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Parameter types for each udf of `kind`, given the input element types.
pub fn udf_param_types(
    kind: TransformationKind,
    inputs: &[ValueType],
) -> Result<Vec<Vec<ValueType>>, String> {
    use TransformationKind::*;
    let first = inputs.first().cloned().ok_or_else(|| format!("{kind} has no input"))?;
    Ok(match kind {
        Map | FlatMap | Filter | SortBy => vec![vec![first]],
        ReduceByKey => match first.as_pair() {
            Some((_, v)) => vec![vec![v.clone(), v.clone()]],
            None => return Err(format!("{kind} requires Pair element type")),
        },
        _ => Vec::new(),
    })
}

/// Output element type of `kind` applied to `inputs` with udfs returning
/// `udf_results`.
pub fn output_type(
    kind: TransformationKind,
    inputs: &[ValueType],
    udf_results: &[ValueType],
) -> Result<ValueType, String> {
    use TransformationKind::*;
    if inputs.len() != kind.arity() {
        return Err(format!("{kind} takes {} input(s), got {}", kind.arity(), inputs.len()));
    }
    if udf_results.len() != kind.udf_count() {
        return Err(format!("{kind} takes {} function(s), got {}", kind.udf_count(), udf_results.len()));
    }
    let a = &inputs[0];
    match kind {
        Map => Ok(udf_results[0].clone()),
        FlatMap => match udf_results[0].as_list() {
            Some(b) => Ok(b.clone()),
            None => Err(format!("{kind} function must return a list")),
        },
        Filter => {
            if udf_results[0] == ValueType::Bool {
                Ok(a.clone())
            } else {
                Err(format!("{kind} predicate must return Bool"))
            }
        }
        Distinct => Ok(a.clone()),
        SortBy => {
            if udf_results[0].is_orderable() {
                Ok(a.clone())
            } else {
                Err(format!("{kind} key must be orderable (int, float, string or bool)"))
            }
        }
        SortByKey => match a.as_pair() {
            Some((k, _)) if k.is_orderable() => Ok(a.clone()),
            Some(_) => Err(format!("{kind} key must be orderable (int, float, string or bool)")),
            None => Err(format!("{kind} requires Pair element type")),
        },
        GroupByKey => match a.as_pair() {
            Some((k, v)) => Ok(ValueType::pair(k.clone(), ValueType::list(v.clone()))),
            None => Err(format!("{kind} requires Pair element type")),
        },
        ReduceByKey => match a.as_pair() {
            Some((_, v)) if udf_results[0] == *v => Ok(a.clone()),
            Some(_) => Err(format!("{kind} function must return the value type")),
            None => Err(format!("{kind} requires Pair element type")),
        },
        Union | Intersection | Subtract => {
            if inputs[0] == inputs[1] {
                Ok(a.clone())
            } else {
                Err(format!("{kind} requires both inputs to have the same element type"))
            }
        }
        Join | LeftOuterJoin | RightOuterJoin | FullOuterJoin => {
            match (inputs[0].as_pair(), inputs[1].as_pair()) {
                (Some((k1, l)), Some((k2, r))) if k1 == k2 => {
                    Ok(ValueType::pair(k1.clone(), ValueType::pair(l.clone(), r.clone())))
                }
                (Some(_), Some(_)) => Err(format!("{kind} requires matching key types")),
                _ => Err(format!("{kind} requires Pair element types")),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LookupError {
    UnknownSite(usize),
    UnknownDataset(usize),
}

impl fmt::Display for LookupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LookupError::UnknownSite(s) => write!(f, "no transformation with id {s}"),
            LookupError::UnknownDataset(d) => write!(f, "no dataset with id {d}"),
        }
    }
}

/// Input element types and output element type of a site.
pub fn signature(graph: &ProgramGraph, site: usize) -> Result<(Vec<ValueType>, ValueType), LookupError> {
    let t = graph.site(site).ok_or(LookupError::UnknownSite(site))?;
    site_signature(graph, t)
}

pub(crate) fn site_signature(
    graph: &ProgramGraph,
    t: &Transformation,
) -> Result<(Vec<ValueType>, ValueType), LookupError> {
    let elem = |id: DatasetId| {
        graph.dataset(id).map(|d| d.elem.clone()).ok_or(LookupError::UnknownDataset(id.0))
    };
    let inputs = t.inputs.iter().map(|i| elem(*i)).collect::<Result<Vec<_>, _>>()?;
    Ok((inputs, elem(t.output)?))
}

/// Validates every structural and typing rule of the graph.
pub fn validate(graph: &ProgramGraph) -> Result<(), Vec<GraphDiagnostic>> {
    let mut diags = Vec::new();

    let mut names = BTreeSet::new();
    for (i, d) in graph.datasets.iter().enumerate() {
        if d.id.0 != i {
            push(&mut diags, None, Rule::UnknownDataset, format!("dataset '{}' has id {} at index {i}", d.name, d.id.0));
        }
        if !names.insert(d.name.as_str()) {
            push(&mut diags, None, Rule::UniqueNames, format!("dataset name '{}' is defined twice", d.name));
        }
    }
    let known = |id: DatasetId| id.0 < graph.datasets.len();
    for input in &graph.inputs {
        if !known(*input) {
            push(&mut diags, None, Rule::UnknownDataset, format!("input refers to unknown dataset {}", input.0));
        }
    }

    let mut producers: Vec<Vec<usize>> = vec![Vec::new(); graph.datasets.len()];
    for (index, t) in graph.transformations.iter().enumerate() {
        let site = Some(t.id);
        if t.id != index {
            push(&mut diags, site, Rule::SiteNumbering, format!("transformation id {} does not match position {index}", t.id));
        }
        let kind = t.kind();
        if t.inputs.len() != kind.arity() {
            push(&mut diags, site, Rule::Arity, format!("{kind} takes {} input(s), got {}", kind.arity(), t.inputs.len()));
            continue;
        }
        if t.op.udfs.len() != kind.udf_count() {
            push(&mut diags, site, Rule::UdfCount, format!("{kind} takes {} function(s), got {}", kind.udf_count(), t.op.udfs.len()));
            continue;
        }
        if let Some(bad) = t.inputs.iter().chain(core::iter::once(&t.output)).find(|d| !known(**d)) {
            push(&mut diags, site, Rule::UnknownDataset, format!("reference to unknown dataset {}", bad.0));
            continue;
        }
        producers[t.output.0].push(t.id);
        let input_types: Vec<ValueType> = t.inputs.iter().map(|d| graph.datasets[d.0].elem.clone()).collect();

        let expected_params = match udf_param_types(kind, &input_types) {
            Ok(p) => p,
            Err(message) => {
                push(&mut diags, site, Rule::Signature, message);
                continue;
            }
        };
        let mut udf_results = Vec::new();
        let mut udf_ok = true;
        for (udf, expected) in t.op.udfs.iter().zip(&expected_params) {
            if udf.param_types() != *expected {
                push(&mut diags, site, Rule::UdfType, format!("{kind} function parameters do not match the input element type"));
                udf_ok = false;
                continue;
            }
            match udf.recheck() {
                Ok(ty) => udf_results.push(ty),
                Err(e) => {
                    push(&mut diags, site, Rule::UdfType, e.0);
                    udf_ok = false;
                }
            }
        }
        if !udf_ok {
            continue;
        }
        match output_type(kind, &input_types, &udf_results) {
            Ok(out) => {
                let declared = &graph.datasets[t.output.0].elem;
                if out != *declared {
                    push(&mut diags, 
                        site,
                        Rule::DeclaredType,
                        format!("output dataset '{}' declared as {declared} but {kind} produces {out}", graph.datasets[t.output.0].name),
                    );
                }
            }
            Err(message) => push(&mut diags, site, Rule::Signature, message),
        }
        if let Some(adj) = &t.op.join_adjustment {
            let (left_opt, right_opt) = kind.optional_sides();
            let ok = kind.is_join()
                && adj.left_default.is_some() == left_opt
                && adj.right_default.is_some() == right_opt;
            if !ok {
                push(&mut diags, site, Rule::Signature, format!("join adjustment does not fit {kind}"));
            }
        }
    }

    for (i, ps) in producers.iter().enumerate() {
        let is_input = graph.inputs.contains(&DatasetId(i));
        let name = &graph.datasets[i].name;
        match (is_input, ps.len()) {
            (true, 0) | (false, 1) => {}
            (true, _) => push(&mut diags, Some(ps[0]), Rule::SingleProducer, format!("input dataset '{name}' cannot be produced by a transformation")),
            (false, 0) => push(&mut diags, None, Rule::SingleProducer, format!("dataset '{name}' is not produced by any transformation")),
            (false, _) => push(&mut diags, Some(ps[1]), Rule::SingleProducer, format!("dataset '{name}' is produced more than once")),
        }
    }

    if graph.outputs.is_empty() {
        push(&mut diags, None, Rule::Outputs, String::from("program declares no outputs"));
    }
    let mut out_names = BTreeSet::new();
    for o in &graph.outputs {
        if !known(o.dataset) {
            push(&mut diags, None, Rule::Outputs, format!("output '{}' refers to unknown dataset", o.name));
        }
        if !out_names.insert(o.name.as_str()) {
            push(&mut diags, None, Rule::Outputs, format!("output '{}' is declared twice", o.name));
        }
    }

    if diags.is_empty() && topological_order(graph).is_none() {
        push(&mut diags, None, Rule::Acyclic, String::from("the dataflow graph contains a cycle"));
    }

    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

fn push(diags: &mut Vec<GraphDiagnostic>, site: Option<usize>, rule: Rule, message: String) {
    diags.push(GraphDiagnostic { site, rule, message });
}

/// Site execution order: a topological order that prefers lower site ids.
/// Returns `None` when the graph has a cycle.
pub fn topological_order(graph: &ProgramGraph) -> Option<Vec<usize>> {
    let n = graph.transformations.len();
    let mut producer = vec![None; graph.datasets.len()];
    for t in &graph.transformations {
        if let Some(slot) = producer.get_mut(t.output.0) {
            *slot = Some(t.id);
        }
    }
    let deps: Vec<Vec<usize>> = graph
        .transformations
        .iter()
        .map(|t| t.inputs.iter().filter_map(|d| producer.get(d.0).copied().flatten()).collect())
        .collect();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&i| !done[i] && deps[i].iter().all(|&d| d < n && done[d]))?;
        done[next] = true;
        order.push(next);
    }
    Some(order)
}
