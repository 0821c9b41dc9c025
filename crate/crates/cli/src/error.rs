use std::io;

use thiserror::Error;

use fasill::syntax::ParseError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("unknown command '{0}'")]
    UnknownCommand(String),
    #[error("{path}:{error}")]
    Program { path: String, error: ParseError },
    #[error("goal:{error}")]
    Goal { error: ParseError },
    #[error("{path}: {message}")]
    Lattice { path: String, message: String },
    #[error("{path}:{}", located(.message))]
    Sim { path: String, message: String },
    #[error("runtime error: {0}")]
    Runtime(String),
}

/// Messages that start with a line number attach to the path directly.
fn located(message: &str) -> String {
    if message.starts_with(|c: char| c.is_ascii_digit()) {
        message.to_string()
    } else {
        format!(" {message}")
    }
}

impl CliError {
    /// Process exit status: 1 I/O or usage, 2 program or goal syntax,
    /// 3 lattice, 4 similarity, 5 runtime.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) | CliError::UnknownCommand(_) => 1,
            CliError::Program { .. } | CliError::Goal { .. } => 2,
            CliError::Lattice { .. } => 3,
            CliError::Sim { .. } => 4,
            CliError::Runtime(_) => 5,
        }
    }
}
