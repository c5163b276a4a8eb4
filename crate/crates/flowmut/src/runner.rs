//! Worker pool for mutant execution.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use flowmut_core::harness::{run_mutant, Cell, TestCase};
use flowmut_core::mutation::MetaMutant;

/// Runs the tests against each mutant in `ids` on up to `workers` threads.
/// Each execution only reads the shared meta-mutant, so the result does not
/// depend on scheduling; it is keyed by mutant id.
pub fn run_parallel(
    meta: &MetaMutant,
    tests: &[TestCase],
    ids: &[u32],
    workers: usize,
    short_circuit: bool,
) -> BTreeMap<u32, Vec<Cell>> {
    let workers = workers.clamp(1, ids.len().max(1));
    if workers == 1 {
        return ids.iter().map(|&id| (id, run_mutant(meta, tests, id, short_circuit))).collect();
    }
    let next = AtomicUsize::new(0);
    let results = Mutex::new(BTreeMap::new());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&id) = ids.get(i) else { break };
                let cells = run_mutant(meta, tests, id, short_circuit);
                results.lock().unwrap_or_else(|e| e.into_inner()).insert(id, cells);
            });
        }
    });
    results.into_inner().unwrap_or_else(|e| e.into_inner())
}
