//! Eager, deterministic evaluator for program graphs.

use alloc::borrow::Cow;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

mod eval;

pub use eval::{apply_mapping, eval, eval_udf};

use crate::model::{DatasetId, Operation, ProgramGraph, Transformation, TransformationKind, Value, ValueType};

/// A concrete dataset: an ordered sequence of elements of one type.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetInstance {
    pub elem: ValueType,
    pub elements: Vec<Value>,
}

impl DatasetInstance {
    pub fn new(elem: ValueType, elements: Vec<Value>) -> Self {
        DatasetInstance { elem, elements }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuntimeError {
    pub site: usize,
    pub message: String,
}

impl fmt::Display for RuntimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "runtime error at site {}: {}", self.site, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExecError {
    MissingInput(String),
    UnknownInput(String),
    InputTypeMismatch { input: String, expected: ValueType, found: ValueType },
    NonConformingElement { input: String, index: usize },
    UnknownMutant(u32),
    Runtime(RuntimeError),
}

impl fmt::Display for ExecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExecError::MissingInput(n) => write!(f, "no data bound to input '{n}'"),
            ExecError::UnknownInput(n) => write!(f, "'{n}' is not an input of the program"),
            ExecError::InputTypeMismatch { input, expected, found } => {
                write!(f, "input '{input}' has element type {found}, expected {expected}")
            }
            ExecError::NonConformingElement { input, index } => {
                write!(f, "element {index} of input '{input}' does not conform to its element type")
            }
            ExecError::UnknownMutant(id) => write!(f, "no mutant with id {id}"),
            ExecError::Runtime(e) => e.fmt(f),
        }
    }
}

impl From<RuntimeError> for ExecError {
    fn from(e: RuntimeError) -> Self {
        ExecError::Runtime(e)
    }
}

pub type Outputs = BTreeMap<String, DatasetInstance>;

/// What a site does during a switched execution.
#[derive(Debug, Clone)]
pub enum Step<'a> {
    /// Run `op` on `inputs`, then optionally run `then` on the result.
    Apply { op: Cow<'a, Operation>, inputs: &'a [DatasetId], then: Option<&'a Operation> },
    /// Copy a dataset through unchanged.
    Forward(DatasetId),
}

impl<'a> Step<'a> {
    pub fn original(t: &'a Transformation) -> Self {
        Step::Apply { op: Cow::Borrowed(&t.op), inputs: &t.inputs, then: None }
    }
}

/// Executes `graph` on `inputs` and returns every declared output.
pub fn execute(graph: &ProgramGraph, inputs: &BTreeMap<String, DatasetInstance>) -> Result<Outputs, ExecError> {
    execute_switched(graph, inputs, &|t| Step::original(t))
}

/// Executes `graph`, asking `step` how each site behaves. Dataset wiring
/// (which dataset a site writes) always follows `graph`.
pub fn execute_switched<'a>(
    graph: &'a ProgramGraph,
    inputs: &BTreeMap<String, DatasetInstance>,
    step: &dyn Fn(&'a Transformation) -> Step<'a>,
) -> Result<Outputs, ExecError> {
    let mut data: Vec<Option<Vec<Value>>> = alloc::vec![None; graph.datasets.len()];
    let declared: BTreeSet<&str> = graph.input_names().collect();
    if let Some(extra) = inputs.keys().find(|k| !declared.contains(k.as_str())) {
        return Err(ExecError::UnknownInput(extra.clone()));
    }
    for id in &graph.inputs {
        let ds = &graph.datasets[id.0];
        let given = inputs.get(&ds.name).ok_or_else(|| ExecError::MissingInput(ds.name.clone()))?;
        if given.elem != ds.elem {
            return Err(ExecError::InputTypeMismatch {
                input: ds.name.clone(),
                expected: ds.elem.clone(),
                found: given.elem.clone(),
            });
        }
        if let Some(index) = given.elements.iter().position(|v| !v.conforms_to(&ds.elem)) {
            return Err(ExecError::NonConformingElement { input: ds.name.clone(), index });
        }
        data[id.0] = Some(given.elements.clone());
    }

    let order = crate::model::topological_order(graph).unwrap_or_else(|| (0..graph.transformations.len()).collect());
    for site in order {
        let t = &graph.transformations[site];
        let fail = |message: String| RuntimeError { site, message };
        let result = match step(t) {
            Step::Forward(d) => data[d.0].clone().ok_or_else(|| fail(String::from("dataset not yet computed")))?,
            Step::Apply { op, inputs, then } => {
                let mut args = Vec::with_capacity(inputs.len());
                for d in inputs {
                    let values = data[d.0].as_deref().ok_or_else(|| fail(String::from("dataset not yet computed")))?;
                    args.push(SiteInput { elem: &graph.datasets[d.0].elem, values });
                }
                let out = apply_operation(&op, &args).map_err(fail)?;
                match then {
                    Some(next) => {
                        let elem = &graph.datasets[t.output.0].elem;
                        apply_operation(next, &[SiteInput { elem, values: &out }]).map_err(fail)?
                    }
                    None => out,
                }
            }
        };
        data[t.output.0] = Some(result);
    }

    let mut outputs = Outputs::new();
    for o in &graph.outputs {
        let elements = data[o.dataset.0].clone().unwrap_or_default();
        outputs.insert(o.name.clone(), DatasetInstance::new(graph.datasets[o.dataset.0].elem.clone(), elements));
    }
    Ok(outputs)
}

/// One input of a transformation: its element type and current contents.
#[derive(Debug, Clone, Copy)]
pub struct SiteInput<'v> {
    pub elem: &'v ValueType,
    pub values: &'v [Value],
}

fn split_pair(v: &Value) -> Result<(&Value, &Value), String> {
    match v {
        Value::Pair(k, v) => Ok((k, v)),
        Value::Null => Err(String::from("null element where a pair is required")),
        other => Err(format!("expected a pair, found {other}")),
    }
}

fn check_sort_key(k: &Value) -> Result<(), String> {
    match k {
        Value::Null => Err(String::from("null sort key")),
        Value::Float(x) if x.is_nan() => Err(String::from("NaN sort key")),
        _ => Ok(()),
    }
}

fn stable_sort(items: Vec<Value>, keys: Vec<Value>, ascending: bool) -> Vec<Value> {
    let mut indexed: Vec<(Value, Value)> = keys.into_iter().zip(items).collect();
    if ascending {
        indexed.sort_by(|a, b| a.0.cmp(&b.0));
    } else {
        indexed.sort_by(|a, b| b.0.cmp(&a.0));
    }
    indexed.into_iter().map(|(_, v)| v).collect()
}

/// Groups pair elements by key in first-occurrence order.
fn group(values: &[Value]) -> Result<Vec<(Value, Vec<Value>)>, String> {
    let mut index: BTreeMap<&Value, usize> = BTreeMap::new();
    let mut groups: Vec<(Value, Vec<Value>)> = Vec::new();
    for v in values {
        let (k, val) = split_pair(v)?;
        match index.get(k) {
            Some(&i) => groups[i].1.push(val.clone()),
            None => {
                index.insert(k, groups.len());
                groups.push((k.clone(), alloc::vec![val.clone()]));
            }
        }
    }
    Ok(groups)
}

/// Applies one operation to materialized inputs.
pub fn apply_operation(op: &Operation, inputs: &[SiteInput<'_>]) -> Result<Vec<Value>, String> {
    use TransformationKind::*;
    if inputs.len() != op.kind.arity() {
        return Err(format!("{} expects {} input(s)", op.kind, op.kind.arity()));
    }
    let left = inputs[0].values;
    let udf = op.udfs.first();
    let call = |args: &[Value]| match udf {
        Some(u) => eval_udf(u, args),
        None => Err(format!("{} has no function", op.kind)),
    };
    Ok(match op.kind {
        Map => left.iter().map(|v| call(core::slice::from_ref(v))).collect::<Result<_, _>>()?,
        FlatMap => {
            let mut out = Vec::new();
            for v in left {
                match call(core::slice::from_ref(v))? {
                    Value::List(items) => out.extend(items),
                    Value::Null => return Err(String::from("flatMap function returned null")),
                    other => return Err(format!("flatMap function returned non-list {other}")),
                }
            }
            out
        }
        Filter => {
            let mut out = Vec::new();
            for v in left {
                match call(core::slice::from_ref(v))? {
                    Value::Bool(true) => out.push(v.clone()),
                    Value::Bool(false) => {}
                    Value::Null => return Err(String::from("filter predicate returned null")),
                    other => return Err(format!("filter predicate returned non-bool {other}")),
                }
            }
            out
        }
        Distinct => {
            let mut seen = BTreeSet::new();
            left.iter().filter(|v| seen.insert(*v)).cloned().collect()
        }
        SortBy => {
            let keys = left.iter().map(|v| call(core::slice::from_ref(v))).collect::<Result<Vec<_>, _>>()?;
            keys.iter().try_for_each(check_sort_key)?;
            stable_sort(left.to_vec(), keys, op.ascending)
        }
        SortByKey => {
            let keys = left.iter().map(|v| split_pair(v).map(|(k, _)| k.clone())).collect::<Result<Vec<_>, _>>()?;
            keys.iter().try_for_each(check_sort_key)?;
            stable_sort(left.to_vec(), keys, op.ascending)
        }
        GroupByKey => group(left)?.into_iter().map(|(k, vs)| Value::pair(k, Value::List(vs))).collect(),
        ReduceByKey => {
            let mut out = Vec::new();
            for (k, vs) in group(left)? {
                let mut it = vs.into_iter();
                let mut acc = it.next().unwrap_or(Value::Null);
                for v in it {
                    acc = call(&[acc, v])?;
                }
                out.push(Value::pair(k, acc));
            }
            out
        }
        Union => left.iter().chain(inputs[1].values).cloned().collect(),
        Intersection => {
            let right: BTreeSet<&Value> = inputs[1].values.iter().collect();
            let mut seen = BTreeSet::new();
            left.iter().filter(|v| right.contains(v) && seen.insert(*v)).cloned().collect()
        }
        Subtract => {
            let right: BTreeSet<&Value> = inputs[1].values.iter().collect();
            left.iter().filter(|v| !right.contains(v)).cloned().collect()
        }
        Join | LeftOuterJoin | RightOuterJoin | FullOuterJoin => join(op, inputs)?,
    })
}

fn side_default(elem: &ValueType, configured: Option<&Value>) -> Value {
    match configured {
        Some(v) => v.clone(),
        None => elem.as_pair().map(|(_, v)| v.default_value()).unwrap_or(Value::Null),
    }
}

fn join(op: &Operation, inputs: &[SiteInput<'_>]) -> Result<Vec<Value>, String> {
    let (keep_left, keep_right) = match op.kind {
        TransformationKind::LeftOuterJoin => (true, false),
        TransformationKind::RightOuterJoin => (false, true),
        TransformationKind::FullOuterJoin => (true, true),
        _ => (false, false),
    };
    let adj = op.join_adjustment.as_ref();
    let left_default = side_default(inputs[0].elem, adj.and_then(|a| a.left_default.as_ref()));
    let right_default = side_default(inputs[1].elem, adj.and_then(|a| a.right_default.as_ref()));

    let right: Vec<(&Value, &Value)> = inputs[1].values.iter().map(split_pair).collect::<Result<_, _>>()?;
    let mut by_key: BTreeMap<&Value, Vec<usize>> = BTreeMap::new();
    for (i, (k, _)) in right.iter().enumerate() {
        by_key.entry(*k).or_default().push(i);
    }
    let mut right_matched = alloc::vec![false; right.len()];
    let mut out = Vec::new();
    for l in inputs[0].values {
        let (k, a) = split_pair(l)?;
        match by_key.get(k) {
            Some(matches) => {
                for &i in matches {
                    right_matched[i] = true;
                    out.push(Value::pair(k.clone(), Value::pair(a.clone(), right[i].1.clone())));
                }
            }
            None if keep_left => out.push(Value::pair(k.clone(), Value::pair(a.clone(), right_default.clone()))),
            None => {}
        }
    }
    if keep_right {
        for (i, (k, b)) in right.iter().enumerate() {
            if !right_matched[i] {
                out.push(Value::pair((*k).clone(), Value::pair(left_default.clone(), (*b).clone())));
            }
        }
    }
    Ok(out)
}
