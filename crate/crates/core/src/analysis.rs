//! Mutation score and per-operator statistics.

use alloc::vec::Vec;

use num_rational::Ratio;

use crate::harness::{KillMatrix, Outcome};
use crate::mutation::MutationOperatorId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MutationScore {
    /// DM: killed mutants.
    pub killed: u64,
    /// M: active (non-removed) mutants.
    pub total: u64,
    /// EM: equivalent mutants.
    pub equivalent: u64,
    pub removed: u64,
    /// `None` when there are no active mutants.
    pub ms: Option<Ratio<u64>>,
}

impl MutationScore {
    /// `DM / (M - EM)`, or 1 when every mutant is equivalent. `None` when
    /// `m == 0` or the counts are inconsistent.
    pub fn from_counts(dm: u64, m: u64, em: u64) -> Option<Ratio<u64>> {
        if m == 0 || em > m || dm > m - em {
            None
        } else if m == em {
            Some(Ratio::from_integer(1))
        } else {
            Some(Ratio::new(dm, m - em))
        }
    }

    pub fn ms_f64(&self) -> Option<f64> {
        self.ms.map(|r| *r.numer() as f64 / *r.denom() as f64)
    }
}

pub fn compute_score(matrix: &KillMatrix) -> MutationScore {
    let count = |o: Outcome| matrix.rows.iter().filter(|r| r.outcome == o).count() as u64;
    let killed = count(Outcome::Killed);
    let equivalent = count(Outcome::Equivalent);
    let removed = count(Outcome::Removed);
    let total = killed + equivalent + count(Outcome::Survived);
    MutationScore { killed, total, equivalent, removed, ms: MutationScore::from_counts(killed, total, equivalent) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorStats {
    pub operator: MutationOperatorId,
    pub generated: u64,
    pub equivalent: u64,
    pub removed: u64,
    /// Killing test executions over all test executions of the operator's
    /// executed, non-equivalent mutants.
    pub killed_ratio: Option<Ratio<u64>>,
}

impl OperatorStats {
    /// Killed ratio as a percentage.
    pub fn killed_ratio_percent(&self) -> Option<f64> {
        self.killed_ratio.map(|r| 100.0 * *r.numer() as f64 / *r.denom() as f64)
    }
}

/// Statistics for all fifteen operators, in canonical order.
pub fn compute_operator_stats(matrix: &KillMatrix) -> Vec<OperatorStats> {
    MutationOperatorId::ALL
        .into_iter()
        .map(|op| {
            let rows: Vec<_> = matrix.rows.iter().filter(|r| r.operator == op).collect();
            let count = |o: Outcome| rows.iter().filter(|r| r.outcome == o).count() as u64;
            let (kills, runs) = rows
                .iter()
                .filter(|r| matches!(r.outcome, Outcome::Killed | Outcome::Survived) && r.executed() > 0)
                .fold((0u64, 0u64), |(k, n), r| (k + r.killing() as u64, n + r.executed() as u64));
            OperatorStats {
                operator: op,
                generated: rows.len() as u64,
                equivalent: count(Outcome::Equivalent),
                removed: count(Outcome::Removed),
                killed_ratio: (runs > 0).then(|| Ratio::new(kills, runs)),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{Cell, MutantRow, Verdict};
    use alloc::string::String;
    use alloc::vec;

    fn row(id: u32, op: MutationOperatorId, outcome: Outcome, verdicts: &[bool]) -> MutantRow {
        let cells = verdicts
            .iter()
            .enumerate()
            .map(|(i, pass)| Cell {
                test: alloc::format!("t{i}"),
                verdict: if *pass { Verdict::Pass } else { Verdict::Fail(String::new()) },
            })
            .collect();
        MutantRow { id, operator: op, removed_by: None, outcome, cells }
    }

    #[test]
    fn reference_counts_score_one() {
        assert_eq!(MutationScore::from_counts(22, 27, 5), Some(Ratio::from_integer(1)));
        assert_eq!(MutationScore::from_counts(0, 10, 0), Some(Ratio::from_integer(0)));
        assert_eq!(MutationScore::from_counts(0, 3, 3), Some(Ratio::from_integer(1)));
        assert_eq!(MutationScore::from_counts(0, 0, 0), None);
    }

    #[test]
    fn killed_ratio_single_mutant() {
        let m = KillMatrix { tests: vec![], rows: vec![row(1, MutationOperatorId::MTR, Outcome::Killed, &[true, false, true, true])] };
        let stats = compute_operator_stats(&m);
        assert_eq!(stats[5].killed_ratio_percent(), Some(25.0));
    }

    #[test]
    fn killed_ratio_is_pooled() {
        let m = KillMatrix {
            tests: vec![],
            rows: vec![
                row(1, MutationOperatorId::ATR, Outcome::Killed, &[false, true, true, true]),
                row(2, MutationOperatorId::ATR, Outcome::Killed, &[false, false, false, true]),
            ],
        };
        let s = compute_operator_stats(&m)[11];
        assert_eq!(s.operator, MutationOperatorId::ATR);
        assert_eq!(s.killed_ratio, Some(Ratio::new(1, 2)));
    }

    #[test]
    fn all_removed_has_no_ratio() {
        let m = KillMatrix { tests: vec![], rows: vec![row(1, MutationOperatorId::OTI, Outcome::Removed, &[])] };
        let s = compute_operator_stats(&m)[14];
        assert_eq!((s.generated, s.removed, s.killed_ratio), (1, 1, None));
    }
}
