//! The `run`, `alive` and `exec` workflows.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use flowmut_core::dsl::parse_source;
use flowmut_core::harness::{
    assemble, judge, merge_alive, plan_alive, plan_run, run_original, AliveError, RunOptions, TestCase, Verdict,
};
use flowmut_core::mutation::{build_meta_mutant, generate_mutants, reduce_mutants, render_mutant, MetaMutant};
use flowmut_core::ProgramGraph;

use crate::config::{source_hash, RunConfig};
use crate::report::{Report, Timings};
use crate::runner::run_parallel;
use crate::suite::SuiteFile;
use crate::{html, Error};

pub const REPORT_JSON: &str = "report.json";
pub const REPORT_HTML: &str = "report.html";

/// Command-line settings that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub force_mutants: Option<Vec<u32>>,
    /// Restrict the command to one of the configured programs.
    pub program: Option<String>,
}

/// Everything loaded from disk before any mutant is built.
pub struct Workspace {
    pub config: RunConfig,
    /// Programs to mutate, in configuration order.
    pub programs: Vec<ProgramGraph>,
    /// Names of every configured program, before `--program` filtering.
    pub configured: Vec<String>,
    pub tests: BTreeMap<String, Vec<TestCase>>,
    pub source_hash: String,
}

impl Workspace {
    pub fn load(config_path: &Path, overrides: &Overrides) -> Result<Workspace, Error> {
        let mut config = RunConfig::load(config_path)?;
        if let Some(out) = &overrides.out_dir {
            config.out_dir = out.clone();
        }
        if let Some(w) = overrides.workers {
            if w == 0 {
                return Err(Error::Config("--workers must be at least 1".into()));
            }
            config.workers = w;
        }

        let mut texts = Vec::new();
        let mut all: Vec<ProgramGraph> = Vec::new();
        for path in &config.sources {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let graphs = parse_source(path.to_str(), &text).map_err(|diags| {
                Error::Config(diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))
            })?;
            for g in graphs {
                if all.iter().any(|h| h.name == g.name) {
                    return Err(Error::Config(format!("program '{}' is defined twice", g.name)));
                }
                all.push(g);
            }
            texts.push(text);
        }

        let configured: Vec<String> =
            if config.programs.is_empty() { all.iter().map(|g| g.name.clone()).collect() } else { config.programs.clone() };
        for name in &configured {
            if !all.iter().any(|g| &g.name == name) {
                return Err(Error::Config(format!("unknown program '{name}'")));
            }
        }
        let selected: Vec<String> = match &overrides.program {
            Some(p) if configured.contains(p) => vec![p.clone()],
            Some(p) => return Err(Error::Config(format!("unknown program '{p}'"))),
            None => configured.clone(),
        };
        let programs: Vec<ProgramGraph> =
            selected.iter().filter_map(|n| all.iter().find(|g| &g.name == n).cloned()).collect();

        let mut tests: BTreeMap<String, Vec<TestCase>> = programs.iter().map(|g| (g.name.clone(), Vec::new())).collect();
        for path in &config.tests {
            let suite = SuiteFile::load(path)?;
            let Some(graph) = all.iter().find(|g| g.name == suite.program) else {
                return Err(Error::Config(format!("{}: unknown program '{}'", path.display(), suite.program)));
            };
            let Some(list) = tests.get_mut(&suite.program) else { continue };
            let resolved = suite.resolve(graph).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            for t in resolved {
                if list.iter().any(|u| u.name == t.name) {
                    return Err(Error::Config(format!("{}: duplicate test name '{}'", path.display(), t.name)));
                }
                list.push(t);
            }
        }

        if let Some(force) = &overrides.force_mutants {
            if force.contains(&0) {
                return Err(Error::Config("--force-mutants: mutant ids start at 1".into()));
            }
            if programs.len() > 1 {
                return Err(Error::Config("--force-mutants needs --program when several programs are mutated".into()));
            }
            let mut merged: BTreeSet<u32> = RunConfig::ids_for(&config.force, &programs[0].name, &configured, "force-mutants")?;
            merged.extend(force.iter().copied());
            config.force = crate::config::IdSelection::PerProgram(BTreeMap::from([(
                programs[0].name.clone(),
                merged.into_iter().collect(),
            )]));
        }

        let source_hash = source_hash(&texts, &config);
        Ok(Workspace { config, programs, configured, tests, source_hash })
    }

    /// Reports go straight into the output directory for a single program
    /// and into one subdirectory per program otherwise.
    pub fn report_dir(&self, program: &str) -> PathBuf {
        if self.configured.len() > 1 {
            self.config.out_dir.join(program)
        } else {
            self.config.out_dir.clone()
        }
    }

    pub fn options(&self, program: &str) -> Result<RunOptions, Error> {
        let equivalent = RunConfig::ids_for(&self.config.equivalent, program, &self.configured, "equivalent-mutants")?;
        let force_ids = RunConfig::ids_for(&self.config.force, program, &self.configured, "force-mutants")?;
        Ok(RunOptions { short_circuit: self.config.short_circuit, force_removed: false, force_ids, equivalent })
    }

    /// Generates, reduces and compiles the mutants of one program.
    pub fn meta_mutant(&self, graph: &ProgramGraph) -> Result<MetaMutant, Error> {
        let mutants = generate_mutants(graph, &self.config.operators);
        let mutants = reduce_mutants(mutants, graph, &self.config.rules, &self.config.operators);
        build_meta_mutant(graph, mutants)
            .map_err(|(id, e)| Error::Config(format!("{}: mutant {id} cannot be built: {e:?}", graph.name)))
    }

    fn tests_for(&self, program: &str) -> &[TestCase] {
        self.tests.get(program).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

fn check_original(meta: &MetaMutant, tests: &[TestCase]) -> Result<(), Error> {
    let failures: Vec<String> = run_original(meta, tests)
        .into_iter()
        .filter(|c| !c.verdict.is_pass())
        .map(|c| format!("  {}: {}", c.test, c.verdict))
        .collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Error::OriginalFailed(format!(
            "program '{}' fails its tests; fix the program or the tests:\n{}",
            meta.original.name,
            failures.join("\n")
        )))
    }
}

fn write_reports(dir: &Path, report: &Report) -> Result<PathBuf, Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let json = dir.join(REPORT_JSON);
    std::fs::write(&json, report.to_json()).map_err(|e| Error::io(&json, e))?;
    let page = dir.join(REPORT_HTML);
    std::fs::write(&page, html::render(report)).map_err(|e| Error::io(&page, e))?;
    Ok(json)
}

fn summary(report: &Report) -> String {
    let s = &report.mutation_score;
    let ms = s.ms.map(|m| format!("{m:.2}")).unwrap_or_else(|| "n/a".into());
    let survived = report.mutants.iter().filter(|m| m.status == "survived").count();
    format!(
        "{}: {} mutants, {} killed, {} survived, {} equivalent, {} removed, ms {ms}",
        report.program, s.total, s.killed, survived, s.equivalent, s.removed
    )
}

fn secs(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

/// Full workflow. Survivors are not an error.
pub fn cmd_run(ws: &Workspace, out: &mut dyn Write) -> Result<(), Error> {
    let start = Instant::now();
    let mut prepared = Vec::new();
    for graph in &ws.programs {
        let gen = Instant::now();
        let meta = ws.meta_mutant(graph)?;
        let opts = ws.options(&graph.name)?;
        prepared.push((meta, opts, secs(gen)));
    }
    // Every original must pass before any mutant runs.
    for (meta, _, _) in &prepared {
        check_original(meta, ws.tests_for(&meta.original.name))?;
    }
    for (meta, opts, generation_s) in &prepared {
        let tests = ws.tests_for(&meta.original.name);
        let exec = Instant::now();
        let ids = plan_run(meta, opts);
        let results = run_parallel(meta, tests, &ids, ws.config.workers, opts.short_circuit);
        let matrix = assemble(meta, tests, opts, results);
        let execution_s = secs(exec);
        let timings = Timings { generation_s: *generation_s, execution_s, total_s: secs(start) };
        let report = Report::build(meta, &matrix, &ws.source_hash, timings);
        let path = write_reports(&ws.report_dir(&meta.original.name), &report)?;
        let _ = writeln!(out, "{} ({} executed) -> {}", summary(&report), ids.len(), path.display());
    }
    Ok(())
}

/// Reruns the mutants the previous run left alive.
pub fn cmd_alive(ws: &Workspace, out: &mut dyn Write) -> Result<(), Error> {
    let start = Instant::now();
    let mut prepared = Vec::new();
    for graph in &ws.programs {
        let path = ws.report_dir(&graph.name).join(REPORT_JSON);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::Stale(format!("no previous report at {}; run `flowmut run` first", path.display())))
            }
            Err(e) => return Err(Error::io(&path, e)),
        };
        let previous = Report::parse(&text).map_err(|e| Error::Stale(format!("{}: {e}", path.display())))?;
        if previous.source_hash != ws.source_hash || previous.program != graph.name {
            return Err(Error::Stale(format!(
                "{}: sources or operator selection changed since the previous run; run `flowmut run` again",
                path.display()
            )));
        }
        let matrix = previous.to_matrix().map_err(|e| Error::Stale(format!("{}: {e}", path.display())))?;
        let gen = Instant::now();
        let meta = ws.meta_mutant(graph)?;
        let opts = ws.options(&graph.name)?;
        let ids = plan_alive(&matrix, &meta, &opts).map_err(|AliveError::Stale(why)| Error::Stale(why))?;
        prepared.push((meta, opts, matrix, ids, secs(gen)));
    }
    for (meta, ..) in &prepared {
        check_original(meta, ws.tests_for(&meta.original.name))?;
    }
    for (meta, opts, matrix, ids, generation_s) in &prepared {
        let tests = ws.tests_for(&meta.original.name);
        let exec = Instant::now();
        let results = run_parallel(meta, tests, ids, ws.config.workers, opts.short_circuit);
        let merged = merge_alive(matrix, meta, tests, opts, results);
        let timings = Timings { generation_s: *generation_s, execution_s: secs(exec), total_s: secs(start) };
        let report = Report::build(meta, &merged, &ws.source_hash, timings);
        let path = write_reports(&ws.report_dir(&meta.original.name), &report)?;
        let _ = writeln!(out, "{} ({} re-executed) -> {}", summary(&report), ids.len(), path.display());
    }
    Ok(())
}

/// Runs the original or one mutant on one test (or all tests) and prints the
/// outputs and verdicts.
pub fn cmd_exec(
    ws: &Workspace,
    mutant: Option<u32>,
    test: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Error> {
    let graph = match ws.programs.as_slice() {
        [g] => g,
        _ => return Err(Error::Config("several programs are configured; choose one with --program".into())),
    };
    let meta = ws.meta_mutant(graph)?;
    let tests = ws.tests_for(&graph.name);
    let selected: Vec<&TestCase> = match test {
        Some(name) => match tests.iter().find(|t| t.name == name) {
            Some(t) => vec![t],
            None => return Err(Error::Config(format!("unknown test '{name}' for program '{}'", graph.name))),
        },
        None => tests.iter().collect(),
    };
    if selected.is_empty() {
        return Err(Error::Config(format!("program '{}' has no tests to execute", graph.name)));
    }
    if let Some(id) = mutant {
        let Some(m) = meta.mutant(id) else {
            return Err(Error::Config(format!("unknown mutant {id} (program '{}' has {})", graph.name, meta.mutants.len())));
        };
        if let Some(rule) = m.removed_by() {
            let _ = writeln!(err, "warning: mutant {id} was removed by {rule}; executing it anyway");
        }
        let (original, mutated) = render_mutant(&meta.original, m);
        let _ = writeln!(out, "mutant {id} [{}]: {}", m.operator, m.description);
        for l in original.lines() {
            let _ = writeln!(out, "- {l}");
        }
        for l in mutated.lines() {
            let _ = writeln!(out, "+ {l}");
        }
    } else {
        let _ = writeln!(out, "original program '{}'", graph.name);
    }
    for t in selected {
        let result = meta.execute(&t.instances(&meta.original), mutant);
        let _ = writeln!(out, "test {}:", t.name);
        match &result {
            Ok(outputs) => {
                for (name, ds) in outputs {
                    let items: Vec<String> = ds.elements.iter().map(|v| v.to_string()).collect();
                    let _ = writeln!(out, "  {name} = [{}]", items.join(", "));
                }
            }
            Err(e) => {
                let _ = writeln!(out, "  {e}");
            }
        }
        let verdict = judge(t, &result);
        let _ = writeln!(out, "  {}", if let Verdict::Pass = verdict { "PASS".to_string() } else { verdict.to_string() });
    }
    Ok(())
}
