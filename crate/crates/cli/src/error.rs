use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("plan: {0}")]
    Plan(String),

    #[error("{path}: {source}")]
    Parse {
        path: String,
        source: asd_screen_core::Error,
    },

    #[error("{context}: {source}")]
    Eval {
        context: String,
        source: asd_screen_core::Error,
    },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn plan(message: impl Into<String>) -> Self {
        CliError::Plan(message.into())
    }

    pub fn eval(context: impl Into<String>, source: asd_screen_core::Error) -> Self {
        CliError::Eval {
            context: context.into(),
            source,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 3 plan, 4 parse, 5 evaluation, 6 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Plan(_) => 3,
            CliError::Parse { .. } => 4,
            CliError::Eval { .. } => 5,
            CliError::Io { .. } => 6,
        }
    }
}
