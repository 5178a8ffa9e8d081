use std::path::PathBuf;

use thiserror::Error;

/// Failures of a run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("config: {0}")]
    Config(String),
    #[error("{what}: {source}")]
    Setup {
        what: String,
        #[source]
        source: infmem_core::Error,
    },
    #[error("task '{task}' (#{index}): {source}")]
    Task {
        task: String,
        index: usize,
        #[source]
        source: infmem_core::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        RunError::Io { path: path.into(), source }
    }

    /// 2 for configuration and precondition problems, 3 for numeric
    /// failures, 4 for exceeded resource caps.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io { .. } => 2,
            RunError::Setup { source, .. } | RunError::Task { source, .. } => match source {
                infmem_core::Error::Numeric { .. } => 3,
                infmem_core::Error::Capacity(_) => 4,
                _ => 2,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, RunError>;
