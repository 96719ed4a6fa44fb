use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed system document: {0}")]
    Json(#[from] serde_json::Error),

    /// A validation failure inside a system document, located by its key path.
    #[error("`{key}`: {reason}")]
    Document { key: String, reason: String },

    #[error("{0}")]
    Usage(String),

    #[error("palette: {0}")]
    Palette(String),

    #[error(transparent)]
    Core(#[from] sadic::Error),
}

impl CliError {
    pub(crate) fn document(key: impl Into<String>, reason: impl ToString) -> Self {
        CliError::Document {
            key: key.into(),
            reason: reason.to_string(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for failures of the mathematical question asked, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        use sadic::Error as E;
        match self {
            CliError::Core(
                E::Incompatible
                | E::StageIncompatible { .. }
                | E::IncompatibleComposition { .. }
                | E::Unparseable { .. }
                | E::BudgetExceeded { .. }
                | E::WindowTooLarge { .. },
            ) => 1,
            _ => 2,
        }
    }
}
