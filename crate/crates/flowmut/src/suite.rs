//! Test-suite files.

use std::collections::BTreeMap;
use std::path::Path;

use flowmut_core::harness::{Check, Expectation, TestCase, DEFAULT_TOLERANCE};
use flowmut_core::ProgramGraph;
use serde::Deserialize;
use serde_json::Value as Json;

use crate::codec::decode_list;
use crate::Error;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteFile {
    pub program: String,
    pub tests: Vec<RawTest>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTest {
    pub name: String,
    #[serde(default)]
    pub inputs: BTreeMap<String, Json>,
    #[serde(default)]
    pub expect: Vec<RawCheck>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCheck {
    pub output: String,
    #[serde(default)]
    pub mode: Mode,
    pub values: Option<Json>,
    pub size: Option<usize>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Unordered,
    Ordered,
    Size,
}

impl SuiteFile {
    pub fn load(path: &Path) -> Result<SuiteFile, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Decodes every test against the program's declared types.
    pub fn resolve(&self, graph: &ProgramGraph) -> Result<Vec<TestCase>, String> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for t in &self.tests {
            if !seen.insert(t.name.as_str()) {
                return Err(format!("duplicate test name '{}'", t.name));
            }
            out.push(resolve_test(t, graph).map_err(|e| format!("test '{}': {e}", t.name))?);
        }
        Ok(out)
    }
}

fn resolve_test(t: &RawTest, graph: &ProgramGraph) -> Result<TestCase, String> {
    let mut inputs = BTreeMap::new();
    for (name, json) in &t.inputs {
        let ds = graph
            .inputs
            .iter()
            .filter_map(|id| graph.dataset(*id))
            .find(|d| &d.name == name)
            .ok_or_else(|| format!("'{name}' is not an input of program '{}'", graph.name))?;
        let values = decode_list(json, &ds.elem).map_err(|e| format!("input '{name}': {e}"))?;
        inputs.insert(name.clone(), values);
    }
    let mut checks = Vec::new();
    for c in &t.expect {
        let out = graph.output(&c.output).ok_or_else(|| format!("'{}' is not an output of program '{}'", c.output, graph.name))?;
        let elem = &graph.datasets[out.dataset.0].elem;
        let values = |c: &RawCheck| -> Result<Vec<flowmut_core::Value>, String> {
            let json = c.values.as_ref().ok_or_else(|| format!("output '{}': missing \"values\"", c.output))?;
            decode_list(json, elem).map_err(|e| format!("output '{}': {e}", c.output))
        };
        let expectation = match c.mode {
            Mode::Unordered => Expectation::Unordered(values(c)?),
            Mode::Ordered => Expectation::Ordered(values(c)?),
            Mode::Size => match (c.size, &c.values) {
                (Some(n), _) => Expectation::Size(n),
                (None, Some(Json::Array(v))) => Expectation::Size(v.len()),
                _ => return Err(format!("output '{}': size mode needs \"size\"", c.output)),
            },
        };
        let tolerance = c.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if tolerance.is_nan() || tolerance < 0.0 {
            return Err(format!("output '{}': tolerance must be non-negative", c.output));
        }
        checks.push(Check { output: c.output.clone(), expectation, tolerance });
    }
    let test = TestCase { name: t.name.clone(), inputs, checks };
    test.validate_for(graph)?;
    Ok(test)
}
