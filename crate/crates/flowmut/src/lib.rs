//! Driver for mutation testing of `.dflow` programs: configuration and
//! test-suite files, parallel mutant execution, JSON and HTML reports, and
//! the `run`, `alive` and `exec` commands.

use std::path::{Path, PathBuf};

pub mod codec;
pub mod commands;
pub mod config;
pub mod html;
pub mod report;
pub mod runner;
pub mod suite;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad configuration, source, test suite or name on the command line.
    #[error("{0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    /// The unmutated program does not pass its tests.
    #[error("{0}")]
    OriginalFailed(String),
    /// Previous results are missing or were produced from other inputs.
    #[error("{0}")]
    Stale(String),
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::OriginalFailed(_) => 1,
            Error::Config(_) | Error::Io { .. } => 2,
            Error::Stale(_) => 3,
        }
    }
}
