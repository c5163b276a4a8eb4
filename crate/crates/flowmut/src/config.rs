//! `flowmut.json` run configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use flowmut_core::mutation::{MutationOperatorId, ReductionRuleId};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::Error;

pub const DEFAULT_OUT_DIR: &str = "flowmut-report";

/// Mutant ids, either for the only program or keyed by program name.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum IdSelection {
    List(Vec<u32>),
    PerProgram(BTreeMap<String, Vec<u32>>),
}

impl Default for IdSelection {
    fn default() -> Self {
        IdSelection::List(Vec::new())
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct RawConfig {
    sources: Vec<PathBuf>,
    #[serde(default)]
    programs: Vec<String>,
    #[serde(default)]
    tests: Vec<PathBuf>,
    operators: Option<Vec<String>>,
    reduction_rules: Option<Vec<String>>,
    #[serde(default)]
    equivalent_mutants: IdSelection,
    #[serde(default)]
    force_mutants: IdSelection,
    workers: Option<usize>,
    #[serde(default)]
    short_circuit: bool,
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Absolute or config-relative paths, resolved against the config file.
    pub sources: Vec<PathBuf>,
    /// Empty means every program in the sources.
    pub programs: Vec<String>,
    pub tests: Vec<PathBuf>,
    pub operators: BTreeSet<MutationOperatorId>,
    pub rules: BTreeSet<ReductionRuleId>,
    pub equivalent: IdSelection,
    pub force: IdSelection,
    pub workers: usize,
    pub short_circuit: bool,
    pub out_dir: PathBuf,
}

fn parse_names<T>(names: Option<Vec<String>>, all: &[T], parse: fn(&str) -> Option<T>, what: &str) -> Result<BTreeSet<T>, Error>
where
    T: Copy + Ord,
{
    match names {
        None => Ok(all.iter().copied().collect()),
        Some(names) => names
            .iter()
            .map(|n| parse(n).ok_or_else(|| Error::Config(format!("unknown {what} '{n}'"))))
            .collect(),
    }
}

fn check_ids(sel: &IdSelection, key: &str) -> Result<(), Error> {
    let bad = match sel {
        IdSelection::List(ids) => ids.contains(&0),
        IdSelection::PerProgram(m) => m.values().any(|ids| ids.contains(&0)),
    };
    if bad {
        return Err(Error::Config(format!("{key}: mutant ids start at 1")));
    }
    Ok(())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_json(&text, base).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str, base: &Path) -> Result<RunConfig, Error> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if raw.sources.is_empty() {
            return Err(Error::Config("no sources listed".into()));
        }
        if raw.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        check_ids(&raw.equivalent_mutants, "equivalent-mutants")?;
        check_ids(&raw.force_mutants, "force-mutants")?;
        let rel = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };
        Ok(RunConfig {
            sources: raw.sources.into_iter().map(rel).collect(),
            programs: raw.programs,
            tests: raw.tests.into_iter().map(rel).collect(),
            operators: parse_names(raw.operators, &MutationOperatorId::ALL, MutationOperatorId::parse, "operator")?,
            rules: parse_names(raw.reduction_rules, &ReductionRuleId::ALL, ReductionRuleId::parse, "reduction rule")?,
            equivalent: raw.equivalent_mutants,
            force: raw.force_mutants,
            workers: raw.workers.unwrap_or(1),
            short_circuit: raw.short_circuit,
            out_dir: rel(raw.out_dir.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))),
        })
    }

    /// Ids selected for `program`. A plain list is only allowed when a single
    /// program is mutated.
    pub fn ids_for(sel: &IdSelection, program: &str, programs: &[String], key: &str) -> Result<BTreeSet<u32>, Error> {
        match sel {
            IdSelection::List(ids) if ids.is_empty() => Ok(BTreeSet::new()),
            IdSelection::List(_) if programs.len() > 1 => {
                Err(Error::Config(format!("{key}: several programs are mutated, key the ids by program name")))
            }
            IdSelection::List(ids) => Ok(ids.iter().copied().collect()),
            IdSelection::PerProgram(m) => {
                if let Some(unknown) = m.keys().find(|k| !programs.contains(k)) {
                    return Err(Error::Config(format!("{key}: '{unknown}' is not a mutated program")));
                }
                Ok(m.get(program).map(|ids| ids.iter().copied().collect()).unwrap_or_default())
            }
        }
    }
}

/// Hash of the source texts and of the operator and rule selection. A report
/// with a different hash cannot be continued by `alive`.
pub fn source_hash(sources: &[String], config: &RunConfig) -> String {
    let mut h = Sha256::new();
    for s in sources {
        h.update((s.len() as u64).to_le_bytes());
        h.update(s.as_bytes());
    }
    let ops: Vec<&str> = config.operators.iter().map(|o| o.as_str()).collect();
    let rules: Vec<&str> = config.rules.iter().map(|r| r.as_str()).collect();
    h.update(format!("operators={}\nrules={}\n", ops.join(","), rules.join(",")).as_bytes());
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_relative_paths() {
        let c = RunConfig::from_json(r#"{"sources": ["a.dflow"], "tests": ["t.json"]}"#, Path::new("/x")).unwrap();
        assert_eq!(c.sources, vec![PathBuf::from("/x/a.dflow")]);
        assert_eq!(c.operators.len(), 15);
        assert_eq!(c.rules.len(), 6);
        assert_eq!((c.workers, c.short_circuit), (1, false));
        assert_eq!(c.out_dir, PathBuf::from("/x").join(DEFAULT_OUT_DIR));
    }

    #[test]
    fn empty_rule_list_disables_reduction() {
        let c = RunConfig::from_json(r#"{"sources": ["a"], "reduction-rules": [], "operators": ["MTR", "ATR"]}"#, Path::new(".")).unwrap();
        assert!(c.rules.is_empty());
        assert_eq!(c.operators.len(), 2);
    }

    #[test]
    fn rejects_bad_fields() {
        for bad in [
            r#"{"sources": ["a"], "operators": ["XYZ"]}"#,
            r#"{"sources": ["a"], "workers": 0}"#,
            r#"{"sources": ["a"], "equivalent-mutants": [0]}"#,
            r#"{"sources": ["a"], "colour": true}"#,
            r#"{"sources": []}"#,
        ] {
            assert!(matches!(RunConfig::from_json(bad, Path::new(".")), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn id_selection_by_program() {
        let progs = vec!["a".to_string(), "b".to_string()];
        let map = IdSelection::PerProgram(BTreeMap::from([("b".to_string(), vec![3, 4])]));
        assert_eq!(RunConfig::ids_for(&map, "b", &progs, "k").unwrap(), BTreeSet::from([3, 4]));
        assert!(RunConfig::ids_for(&map, "a", &progs, "k").unwrap().is_empty());
        assert!(RunConfig::ids_for(&IdSelection::List(vec![1]), "a", &progs, "k").is_err());
    }

    #[test]
    fn hash_covers_sources_and_operator_selection() {
        let c = RunConfig::from_json(r#"{"sources": ["a"]}"#, Path::new(".")).unwrap();
        let mut d = c.clone();
        d.operators.remove(&MutationOperatorId::UTS);
        let src = vec!["program p".to_string()];
        assert_eq!(source_hash(&src, &c), source_hash(&src, &c.clone()));
        assert_ne!(source_hash(&src, &c), source_hash(&src, &d));
        assert_ne!(source_hash(&src, &c), source_hash(&["program q".to_string()], &c));
    }
}
