use std::path::{Path, PathBuf};

/// Errors of the experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Configuration rejected before any computation.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// A numerical module failed.
    #[error(transparent)]
    Core(#[from] dynsamp_core::Error),
    /// File system failure.
    #[error("{}: {source}", path.display())]
    Io {
        /// File involved.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
    /// Malformed input file.
    #[error("{}: {msg}", path.display())]
    Parse {
        /// File involved.
        path: PathBuf,
        /// What was wrong.
        msg: String,
    },
    /// CSV encoding failure.
    #[error(transparent)]
    Csv(#[from] csv::Error),
    /// JSON encoding failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn parse(path: &Path, msg: impl Into<String>) -> Self {
        Self::Parse {
            path: path.to_path_buf(),
            msg: msg.into(),
        }
    }
}

/// Result alias for the harness.
pub type Result<T> = std::result::Result<T, CliError>;
