use std::path::PathBuf;

use thiserror::Error;

/// A violated precondition on a value passed into the model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContractError {
    #[error("{what} {value} outside [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
}

#[derive(Debug, Error)]
pub enum MavError {
    #[error(transparent)]
    Contract(#[from] ContractError),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("configuration error at line {line}, key `{key}`: {message}")]
    ConfigLine {
        line: usize,
        key: String,
        message: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl MavError {
    /// Configuration problems are caller mistakes; everything else is a
    /// runtime failure. Mirrors the CLI exit codes (1 vs 2).
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            MavError::Contract(_)
                | MavError::Config(_)
                | MavError::ConfigLine { .. }
                | MavError::Parse(_)
                | MavError::UnknownPreset(_)
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        MavError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = MavError> = std::result::Result<T, E>;
