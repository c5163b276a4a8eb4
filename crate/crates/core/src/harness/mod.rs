//! Test cases, verdicts and the kill matrix.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::interp::{DatasetInstance, ExecError, Outputs};
use crate::model::{ProgramGraph, Value};
use crate::mutation::{MetaMutant, MutationOperatorId, ReductionRuleId};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Expectation {
    /// Same elements, any order.
    Unordered(Vec<Value>),
    /// Same elements, same order.
    Ordered(Vec<Value>),
    Size(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub output: String,
    pub expectation: Expectation,
    pub tolerance: f64,
}

impl Check {
    pub fn new(output: impl Into<String>, expectation: Expectation) -> Self {
        Check { output: output.into(), expectation, tolerance: DEFAULT_TOLERANCE }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestCase {
    pub name: String,
    pub inputs: BTreeMap<String, Vec<Value>>,
    pub checks: Vec<Check>,
}

impl TestCase {
    /// Checks that every referenced dataset exists with a matching type.
    pub fn validate_for(&self, graph: &ProgramGraph) -> Result<(), String> {
        let name = &self.name;
        for input in graph.input_names() {
            if !self.inputs.contains_key(input) {
                return Err(format!("test '{name}' binds no data to input '{input}'"));
            }
        }
        for (input, values) in &self.inputs {
            let ds = graph
                .inputs
                .iter()
                .filter_map(|id| graph.dataset(*id))
                .find(|d| d.name == *input)
                .ok_or_else(|| format!("test '{name}': '{input}' is not an input of program '{}'", graph.name))?;
            if let Some(i) = values.iter().position(|v| v.is_null() || !v.conforms_to(&ds.elem)) {
                return Err(format!("test '{name}': element {i} of input '{input}' is not a {}", ds.elem));
            }
        }
        for c in &self.checks {
            let out = graph
                .output(&c.output)
                .ok_or_else(|| format!("test '{name}': '{}' is not an output of program '{}'", c.output, graph.name))?;
            let elem = &graph.datasets[out.dataset.0].elem;
            let values = match &c.expectation {
                Expectation::Unordered(v) | Expectation::Ordered(v) => v.as_slice(),
                Expectation::Size(_) => &[],
            };
            if let Some(i) = values.iter().position(|v| !v.conforms_to(elem)) {
                return Err(format!("test '{name}': expected element {i} of '{}' is not a {elem}", c.output));
            }
        }
        Ok(())
    }

    /// Input bindings typed by the program's declarations.
    pub fn instances(&self, graph: &ProgramGraph) -> BTreeMap<String, DatasetInstance> {
        self.inputs
            .iter()
            .map(|(name, values)| {
                let elem = graph.dataset_by_name(name).map(|d| d.elem.clone()).unwrap_or(crate::ValueType::Int);
                (name.clone(), DatasetInstance::new(elem, values.clone()))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    RuntimeError(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail(_) => "fail",
            Verdict::RuntimeError(_) => "error",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("PASS"),
            Verdict::Fail(why) => write!(f, "FAIL: {why}"),
            Verdict::RuntimeError(why) => write!(f, "ERROR: {why}"),
        }
    }
}

fn unordered_match(expected: &[Value], actual: &[Value], tol: f64) -> Result<(), String> {
    if expected.len() != actual.len() {
        return Err(format!("expected {} elements, got {}", expected.len(), actual.len()));
    }
    let mut used = alloc::vec![false; actual.len()];
    for e in expected {
        match (0..actual.len()).find(|&i| !used[i] && e.approx_eq(&actual[i], tol)) {
            Some(i) => used[i] = true,
            None => return Err(format!("expected element {e} not found")),
        }
    }
    Ok(())
}

/// Compares one output against one check.
pub fn compare(check: &Check, actual: &[Value]) -> Result<(), String> {
    let tol = check.tolerance;
    let res = match &check.expectation {
        Expectation::Size(n) if *n == actual.len() => Ok(()),
        Expectation::Size(n) => Err(format!("expected size {n}, got {}", actual.len())),
        Expectation::Unordered(expected) => unordered_match(expected, actual, tol),
        Expectation::Ordered(expected) => {
            if expected.len() != actual.len() {
                Err(format!("expected {} elements, got {}", expected.len(), actual.len()))
            } else {
                match expected.iter().zip(actual).position(|(e, a)| !e.approx_eq(a, tol)) {
                    Some(i) => Err(format!("at position {i}: expected {}, got {}", expected[i], actual[i])),
                    None => Ok(()),
                }
            }
        }
    };
    res.map_err(|why| format!("output '{}': {why}", check.output))
}

/// Judges an execution result against a test's checks.
pub fn judge(test: &TestCase, result: &Result<Outputs, ExecError>) -> Verdict {
    let outputs = match result {
        Ok(o) => o,
        Err(e) => return Verdict::RuntimeError(format!("{e}")),
    };
    for c in &test.checks {
        let actual = outputs.get(&c.output).map(|d| d.elements.as_slice()).unwrap_or(&[]);
        if let Err(why) = compare(c, actual) {
            return Verdict::Fail(why);
        }
    }
    Verdict::Pass
}

/// Runs one test with mutant `active` (or the original) switched on.
pub fn run_test(meta: &MetaMutant, test: &TestCase, active: Option<u32>) -> Verdict {
    let result = meta.execute(&test.instances(&meta.original), active);
    judge(test, &result)
}

/// Verdicts of the unmutated program, in test order.
pub fn run_original(meta: &MetaMutant, tests: &[TestCase]) -> Vec<Cell> {
    tests.iter().map(|t| Cell { test: t.name.clone(), verdict: run_test(meta, t, None) }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub test: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Killed,
    Survived,
    Equivalent,
    Removed,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Killed => "killed",
            Outcome::Survived => "survived",
            Outcome::Equivalent => "equivalent",
            Outcome::Removed => "removed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Outcome::Killed, Outcome::Survived, Outcome::Equivalent, Outcome::Removed].into_iter().find(|o| o.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutantRow {
    pub id: u32,
    pub operator: MutationOperatorId,
    pub removed_by: Option<ReductionRuleId>,
    pub outcome: Outcome,
    /// Executed tests, in declared order.
    pub cells: Vec<Cell>,
}

impl MutantRow {
    pub fn executed(&self) -> usize {
        self.cells.len()
    }

    pub fn killing(&self) -> usize {
        self.cells.iter().filter(|c| !c.verdict.is_pass()).count()
    }

    pub fn killed_by(&self) -> Vec<&str> {
        self.cells.iter().filter(|c| !c.verdict.is_pass()).map(|c| c.test.as_str()).collect()
    }

    /// Whether the mutant counts towards the score's denominator.
    pub fn is_active(&self) -> bool {
        self.outcome != Outcome::Removed
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KillMatrix {
    pub tests: Vec<String>,
    pub rows: Vec<MutantRow>,
}

impl KillMatrix {
    pub fn row(&self, id: u32) -> Option<&MutantRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn survivors(&self) -> Vec<u32> {
        self.rows.iter().filter(|r| r.outcome == Outcome::Survived).map(|r| r.id).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub short_circuit: bool,
    /// Execute every removed mutant.
    pub force_removed: bool,
    /// Removed mutants to execute anyway.
    pub force_ids: BTreeSet<u32>,
    pub equivalent: BTreeSet<u32>,
}

impl RunOptions {
    fn forced(&self, id: u32) -> bool {
        self.force_removed || self.force_ids.contains(&id)
    }
}

/// Ids that a full run executes, in id order.
pub fn plan_run(meta: &MetaMutant, opts: &RunOptions) -> Vec<u32> {
    meta.mutants
        .iter()
        .filter(|m| (!m.is_removed() || opts.forced(m.id)) && !opts.equivalent.contains(&m.id))
        .map(|m| m.id)
        .collect()
}

/// Executes the tests against one mutant. With `short_circuit`, stops at the
/// first test that kills it.
pub fn run_mutant(meta: &MetaMutant, tests: &[TestCase], id: u32, short_circuit: bool) -> Vec<Cell> {
    let mut cells = Vec::new();
    for t in tests {
        let verdict = run_test(meta, t, Some(id));
        let kill = !verdict.is_pass();
        cells.push(Cell { test: t.name.clone(), verdict });
        if kill && short_circuit {
            break;
        }
    }
    cells
}

fn executed_row(meta: &MetaMutant, id: u32, cells: Vec<Cell>) -> MutantRow {
    let m = meta.mutant(id);
    let killed = cells.iter().any(|c| !c.verdict.is_pass());
    MutantRow {
        id,
        operator: m.map(|m| m.operator).unwrap_or(MutationOperatorId::UTS),
        removed_by: m.and_then(|m| m.removed_by()),
        outcome: if killed { Outcome::Killed } else { Outcome::Survived },
        cells,
    }
}

/// Builds the matrix of a full run from per-mutant results. Mutants absent
/// from `results` are recorded as equivalent or removed.
pub fn assemble(meta: &MetaMutant, tests: &[TestCase], opts: &RunOptions, mut results: BTreeMap<u32, Vec<Cell>>) -> KillMatrix {
    let rows = meta
        .mutants
        .iter()
        .map(|m| match results.remove(&m.id) {
            Some(cells) => executed_row(meta, m.id, cells),
            None => {
                let removed = m.is_removed() && !opts.forced(m.id);
                MutantRow {
                    id: m.id,
                    operator: m.operator,
                    removed_by: m.removed_by(),
                    outcome: if removed { Outcome::Removed } else { Outcome::Equivalent },
                    cells: Vec::new(),
                }
            }
        })
        .collect();
    KillMatrix { tests: tests.iter().map(|t| t.name.clone()).collect(), rows }
}

/// Runs every planned mutant sequentially.
pub fn run_mutants(meta: &MetaMutant, tests: &[TestCase], opts: &RunOptions) -> KillMatrix {
    let results = plan_run(meta, opts).into_iter().map(|id| (id, run_mutant(meta, tests, id, opts.short_circuit))).collect();
    assemble(meta, tests, opts, results)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AliveError {
    /// The previous matrix does not describe the current mutant set.
    Stale(String),
}

impl fmt::Display for AliveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AliveError::Stale(why) => write!(f, "previous results are stale: {why}"),
        }
    }
}

/// Which mutants an alive rerun executes, given the previous matrix.
pub fn plan_alive(previous: &KillMatrix, meta: &MetaMutant, opts: &RunOptions) -> Result<Vec<u32>, AliveError> {
    if previous.rows.len() != meta.mutants.len() {
        return Err(AliveError::Stale(format!(
            "{} mutants recorded, {} generated now",
            previous.rows.len(),
            meta.mutants.len()
        )));
    }
    let mut ids = Vec::new();
    for (row, m) in previous.rows.iter().zip(&meta.mutants) {
        if row.id != m.id || row.operator != m.operator {
            return Err(AliveError::Stale(format!("mutant {} no longer matches", row.id)));
        }
        if opts.equivalent.contains(&m.id) {
            continue;
        }
        let rerun = match row.outcome {
            Outcome::Survived | Outcome::Equivalent => true,
            Outcome::Removed => opts.forced(m.id),
            Outcome::Killed => false,
        };
        if rerun {
            ids.push(m.id);
        }
    }
    Ok(ids)
}

/// Merges alive-rerun results into the previous matrix. Rows not rerun are
/// copied, except that surviving mutants now tagged equivalent become
/// equivalent.
pub fn merge_alive(
    previous: &KillMatrix,
    meta: &MetaMutant,
    tests: &[TestCase],
    opts: &RunOptions,
    mut results: BTreeMap<u32, Vec<Cell>>,
) -> KillMatrix {
    let rows = previous
        .rows
        .iter()
        .map(|row| match results.remove(&row.id) {
            Some(cells) => executed_row(meta, row.id, cells),
            None => {
                let mut row = row.clone();
                if opts.equivalent.contains(&row.id) && row.outcome == Outcome::Survived {
                    row.outcome = Outcome::Equivalent;
                    row.cells.clear();
                } else if opts.equivalent.contains(&row.id)
                    && row.outcome == Outcome::Removed
                    && opts.forced(row.id)
                {
                    row.outcome = Outcome::Equivalent;
                }
                row
            }
        })
        .collect();
    KillMatrix { tests: tests.iter().map(|t| t.name.clone()).collect(), rows }
}

/// Reruns only what the previous run left alive. Returns the updated matrix
/// and the ids that were executed.
pub fn rerun_alive(
    previous: &KillMatrix,
    meta: &MetaMutant,
    tests: &[TestCase],
    opts: &RunOptions,
) -> Result<(KillMatrix, Vec<u32>), AliveError> {
    let ids = plan_alive(previous, meta, opts)?;
    let results = ids.iter().map(|&id| (id, run_mutant(meta, tests, id, opts.short_circuit))).collect();
    Ok((merge_alive(previous, meta, tests, opts, results), ids))
}
