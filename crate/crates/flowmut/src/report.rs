//! `report.json`: the canonical record of a run.

use flowmut_core::analysis::{compute_operator_stats, compute_score, MutationScore};
use flowmut_core::harness::{Cell, KillMatrix, MutantRow, Outcome, Verdict};
use flowmut_core::mutation::{render_mutant, MetaMutant, MutationOperatorId, ReductionRuleId};
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub tool_version: String,
    pub source_hash: String,
    pub program: String,
    pub mutation_score: ScoreRecord,
    pub operators: Vec<OperatorRecord>,
    pub mutants: Vec<MutantRecord>,
    pub timings: Timings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreRecord {
    pub killed: u64,
    pub total: u64,
    pub equivalent: u64,
    pub removed: u64,
    pub ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorRecord {
    pub operator: String,
    pub generated: u64,
    pub equivalent: u64,
    pub removed: u64,
    /// Percentage.
    pub killed_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutantRecord {
    pub id: u32,
    pub operator: String,
    pub sites: Vec<usize>,
    pub description: String,
    pub status: String,
    pub killed_by: Vec<String>,
    pub removed_by: Option<String>,
    pub original: String,
    pub mutated: String,
    pub verdicts: Vec<VerdictRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictRecord {
    pub test: String,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timings {
    pub generation_s: f64,
    pub execution_s: f64,
    pub total_s: f64,
}

fn verdict_record(c: &Cell) -> VerdictRecord {
    let detail = match &c.verdict {
        Verdict::Pass => None,
        Verdict::Fail(why) | Verdict::RuntimeError(why) => Some(why.clone()),
    };
    VerdictRecord { test: c.test.clone(), verdict: c.verdict.as_str().to_string(), detail }
}

impl Report {
    pub fn build(meta: &MetaMutant, matrix: &KillMatrix, source_hash: &str, timings: Timings) -> Report {
        let score = compute_score(matrix);
        let operators = compute_operator_stats(matrix)
            .into_iter()
            .map(|s| OperatorRecord {
                operator: s.operator.as_str().to_string(),
                generated: s.generated,
                equivalent: s.equivalent,
                removed: s.removed,
                killed_ratio: s.killed_ratio_percent(),
            })
            .collect();
        let mutants = matrix
            .rows
            .iter()
            .map(|row| {
                let m = meta.mutant(row.id);
                let (original, mutated) = m.map(|m| render_mutant(&meta.original, m)).unwrap_or_default();
                MutantRecord {
                    id: row.id,
                    operator: row.operator.as_str().to_string(),
                    sites: m.map(|m| m.sites.clone()).unwrap_or_default(),
                    description: m.map(|m| m.description.clone()).unwrap_or_default(),
                    status: row.outcome.as_str().to_string(),
                    killed_by: row.killed_by().into_iter().map(String::from).collect(),
                    removed_by: row.removed_by.map(|r| r.as_str().to_string()),
                    original,
                    mutated,
                    verdicts: row.cells.iter().map(verdict_record).collect(),
                }
            })
            .collect();
        Report {
            tool_version: TOOL_VERSION.to_string(),
            source_hash: source_hash.to_string(),
            program: meta.original.name.clone(),
            mutation_score: score_record(&score),
            operators,
            mutants,
            timings,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Report, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// Canonical text with the timings zeroed, for run-to-run comparison.
    pub fn to_json_without_timings(&self) -> String {
        Report { timings: Timings::default(), ..self.clone() }.to_json()
    }

    /// The kill matrix recorded in the report.
    pub fn to_matrix(&self) -> Result<KillMatrix, String> {
        let mut tests: Vec<String> = Vec::new();
        let mut rows = Vec::new();
        for m in &self.mutants {
            let operator =
                MutationOperatorId::parse(&m.operator).ok_or_else(|| format!("mutant {}: unknown operator '{}'", m.id, m.operator))?;
            let outcome = Outcome::parse(&m.status).ok_or_else(|| format!("mutant {}: unknown status '{}'", m.id, m.status))?;
            let removed_by = match &m.removed_by {
                Some(r) => Some(ReductionRuleId::parse(r).ok_or_else(|| format!("mutant {}: unknown rule '{r}'", m.id))?),
                None => None,
            };
            let mut cells = Vec::new();
            for v in &m.verdicts {
                let detail = v.detail.clone().unwrap_or_default();
                let verdict = match v.verdict.as_str() {
                    "pass" => Verdict::Pass,
                    "fail" => Verdict::Fail(detail),
                    "error" => Verdict::RuntimeError(detail),
                    other => return Err(format!("mutant {}: unknown verdict '{other}'", m.id)),
                };
                if !tests.contains(&v.test) {
                    tests.push(v.test.clone());
                }
                cells.push(Cell { test: v.test.clone(), verdict });
            }
            rows.push(MutantRow { id: m.id, operator, removed_by, outcome, cells });
        }
        Ok(KillMatrix { tests, rows })
    }
}

fn score_record(s: &MutationScore) -> ScoreRecord {
    ScoreRecord { killed: s.killed, total: s.total, equivalent: s.equivalent, removed: s.removed, ms: s.ms_f64() }
}
