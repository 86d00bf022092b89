use std::path::PathBuf;

use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write output: {0}")]
    Write(String),
    #[error(transparent)]
    Domain(#[from] isoconn_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Read { .. } => 2,
            CliError::Write(_) | CliError::Domain(_) => 1,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Parse { .. } => "Parse",
            CliError::Read { .. } => "Read",
            CliError::Write(_) => "Write",
            CliError::Domain(e) => e.code(),
        }
    }

    /// Single-line JSON for standard error.
    pub fn to_json(&self) -> String {
        json!({ "error": self.code(), "message": self.to_string() }).to_string()
    }
}
