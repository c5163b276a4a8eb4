#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use flowmut_core::dsl::parse_source;
use flowmut_core::mutation::{MutationOperatorId, ReductionRuleId};
use flowmut_core::ProgramGraph;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn programs(file: &str) -> Vec<ProgramGraph> {
    let path = fixtures().join("programs").join(file);
    let src = std::fs::read_to_string(&path).unwrap();
    parse_source(path.to_str(), &src).unwrap_or_else(|d| panic!("{}: {d:?}", path.display()))
}

pub fn program(file: &str, name: &str) -> ProgramGraph {
    programs(file).into_iter().find(|g| g.name == name).unwrap()
}

pub fn all_programs() -> Vec<ProgramGraph> {
    let mut names: Vec<_> = std::fs::read_dir(fixtures().join("programs"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names.iter().flat_map(|n| programs(n)).collect()
}

pub fn all_ops() -> BTreeSet<MutationOperatorId> {
    MutationOperatorId::ALL.into_iter().collect()
}

pub fn all_rules() -> BTreeSet<ReductionRuleId> {
    ReductionRuleId::ALL.into_iter().collect()
}

/// One line of a hand-enumerated mutant table.
#[derive(Debug, PartialEq)]
pub struct Expected {
    pub id: u32,
    pub operator: String,
    pub sites: Vec<usize>,
    pub variant: String,
    pub removed_by: Option<String>,
}

pub fn golden_mutants(file: &str) -> Vec<Expected> {
    let text = std::fs::read_to_string(fixtures().join("golden").join(file)).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            Expected {
                id: f[0].parse().unwrap(),
                operator: f[1].to_string(),
                sites: f[2].split(',').map(|s| s.parse().unwrap()).collect(),
                variant: f[3].to_string(),
                removed_by: (f[4] != "-").then(|| f[4].to_string()),
            }
        })
        .collect()
}

pub mod gen {
    use std::collections::BTreeMap;

    use flowmut_core::interp::DatasetInstance;
    use flowmut_core::{ProgramGraph, Value, ValueType};
    use proptest::prelude::*;

    const WORDS: [&str; 10] = ["a", "b", "c", "ERROR", "INFO", "foo", "x", "\t", " ", "-"];

    pub fn value(ty: &ValueType) -> BoxedStrategy<Value> {
        match ty {
            ValueType::Int => (-5i64..30).prop_map(Value::Int).boxed(),
            ValueType::Float => prop::sample::select(vec![0.0, -0.0, 1.5, 2.0, 10.0, 12.25, -3.0])
                .prop_map(Value::Float)
                .boxed(),
            ValueType::Bool => any::<bool>().prop_map(Value::Bool).boxed(),
            ValueType::Str => prop::collection::vec(prop::sample::select(WORDS.to_vec()), 0..5)
                .prop_map(|ws| Value::Str(ws.concat()))
                .boxed(),
            ValueType::Pair(k, v) => (value(k), value(v)).prop_map(|(k, v)| Value::pair(k, v)).boxed(),
            ValueType::ListOf(e) => prop::collection::vec(value(e), 0..4).prop_map(Value::List).boxed(),
        }
    }

    /// Random bindings for every input of `graph`.
    pub fn inputs(graph: &ProgramGraph) -> BoxedStrategy<BTreeMap<String, DatasetInstance>> {
        let decls: Vec<(String, ValueType)> = graph
            .inputs
            .iter()
            .map(|id| {
                let d = &graph.datasets[id.0];
                (d.name.clone(), d.elem.clone())
            })
            .collect();
        let parts: Vec<BoxedStrategy<(String, DatasetInstance)>> = decls
            .into_iter()
            .map(|(name, ty)| {
                prop::collection::vec(value(&ty), 0..8)
                    .prop_map(move |vs| (name.clone(), DatasetInstance::new(ty.clone(), vs)))
                    .boxed()
            })
            .collect();
        parts.prop_map(|kv| kv.into_iter().collect()).boxed()
    }
}
