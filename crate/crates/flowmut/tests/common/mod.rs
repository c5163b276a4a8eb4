#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use flowmut::report::Report;
use flowmut_core::dsl::parse_source;
use flowmut_core::harness::{Check, Expectation, TestCase};
use flowmut_core::interp::execute;
use flowmut_core::ProgramGraph;
use serde_json::{json, Value as Json};
use tempfile::TempDir;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_text(rel: &str) -> String {
    std::fs::read_to_string(fixtures().join(rel)).unwrap()
}

pub fn programs(file: &str) -> Vec<ProgramGraph> {
    parse_source(None, &fixture_text(&format!("programs/{file}"))).unwrap()
}

pub fn program(file: &str, name: &str) -> ProgramGraph {
    programs(file).into_iter().find(|g| g.name == name).unwrap()
}

/// A scratch directory holding a `flowmut.json` and its inputs.
pub struct Project {
    pub dir: TempDir,
}

impl Project {
    pub fn new() -> Project {
        Project { dir: tempfile::tempdir().unwrap() }
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.dir.path().join(rel)
    }

    pub fn write(&self, rel: &str, text: &str) {
        let p = self.path(rel);
        std::fs::create_dir_all(p.parent().unwrap()).unwrap();
        std::fs::write(p, text).unwrap();
    }

    pub fn copy_fixture(&self, rel: &str, to: &str) {
        self.write(to, &fixture_text(rel));
    }

    pub fn config(&self, config: Json) {
        self.write("flowmut.json", &serde_json::to_string_pretty(&config).unwrap());
    }

    /// Runs the binary from the project directory.
    pub fn flowmut(&self, args: &[&str]) -> Run {
        let out = Command::new(env!("CARGO_BIN_EXE_flowmut")).args(args).current_dir(self.dir.path()).output().unwrap();
        Run::from(out)
    }

    pub fn report(&self, rel: &str) -> Report {
        Report::parse(&std::fs::read_to_string(self.path(rel)).unwrap()).unwrap()
    }

    pub fn report_text(&self, rel: &str) -> String {
        std::fs::read_to_string(self.path(rel)).unwrap()
    }
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl From<Output> for Run {
    fn from(o: Output) -> Run {
        Run {
            code: o.status.code().unwrap_or(-1),
            stdout: String::from_utf8_lossy(&o.stdout).into_owned(),
            stderr: String::from_utf8_lossy(&o.stderr).into_owned(),
        }
    }
}

impl std::fmt::Debug for Run {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exit {}\n--- stdout\n{}--- stderr\n{}", self.code, self.stdout, self.stderr)
    }
}

/// word_count project with the given suite files and equivalent ids.
pub fn word_count_project(suites: &[&str], equivalent: &[u32]) -> Project {
    let p = Project::new();
    p.copy_fixture("programs/word_count.dflow", "word_count.dflow");
    let mut tests = Vec::new();
    for s in suites {
        p.copy_fixture(&format!("suites/{s}"), s);
        tests.push(s.to_string());
    }
    p.config(json!({
        "sources": ["word_count.dflow"],
        "programs": ["word_count"],
        "tests": tests,
        "equivalent-mutants": equivalent,
        "out-dir": "out"
    }));
    p
}

pub fn statuses(r: &Report) -> BTreeMap<u32, String> {
    r.mutants.iter().map(|m| (m.id, m.status.clone())).collect()
}

pub mod gen {
    use std::collections::BTreeMap;

    use flowmut_core::{ProgramGraph, Value, ValueType};
    use proptest::prelude::*;

    const WORDS: [&str; 10] = ["a", "b", "c", "ERROR", "INFO", "foo", "x", "\t", " ", "-"];

    pub fn value(ty: &ValueType) -> BoxedStrategy<Value> {
        match ty {
            ValueType::Int => (-5i64..30).prop_map(Value::Int).boxed(),
            ValueType::Float => prop::sample::select(vec![0.0, 1.5, 2.0, 10.0, -3.0]).prop_map(Value::Float).boxed(),
            ValueType::Bool => any::<bool>().prop_map(Value::Bool).boxed(),
            ValueType::Str => prop::collection::vec(prop::sample::select(WORDS.to_vec()), 0..5)
                .prop_map(|ws| Value::Str(ws.concat()))
                .boxed(),
            ValueType::Pair(k, v) => (value(k), value(v)).prop_map(|(k, v)| Value::pair(k, v)).boxed(),
            ValueType::ListOf(e) => prop::collection::vec(value(e), 0..4).prop_map(Value::List).boxed(),
        }
    }

    pub fn inputs(graph: &ProgramGraph) -> BoxedStrategy<BTreeMap<String, Vec<Value>>> {
        let parts: Vec<BoxedStrategy<(String, Vec<Value>)>> = graph
            .inputs
            .iter()
            .map(|id| {
                let d = &graph.datasets[id.0];
                let name = d.name.clone();
                prop::collection::vec(value(&d.elem), 0..7).prop_map(move |vs| (name.clone(), vs)).boxed()
            })
            .collect();
        parts.prop_map(|kv| kv.into_iter().collect()).boxed()
    }
}

/// A test whose expectations are the original program's outputs on `inputs`,
/// or `None` if the original fails on them.
pub fn oracle_test(graph: &ProgramGraph, name: &str, inputs: BTreeMap<String, Vec<flowmut_core::Value>>) -> Option<TestCase> {
    let mut t = TestCase { name: name.to_string(), inputs, checks: Vec::new() };
    let outputs = execute(graph, &t.instances(graph)).ok()?;
    for o in &graph.outputs {
        t.checks.push(Check::new(o.name.clone(), Expectation::Unordered(outputs[&o.name].elements.clone())));
    }
    Some(t)
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}
