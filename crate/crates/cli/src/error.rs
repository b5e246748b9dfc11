use std::fmt;

use thiserror::Error;

/// A malformed input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub file: String,
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(file: &str, line: usize, message: String) -> Self {
        ParseError {
            file: file.to_string(),
            line,
            message,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.file, self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Io(String),
    #[error("{file}:{line}: {message}")]
    Runtime { file: String, line: usize, message: String },
    #[error("{file}:{line}: {message}")]
    Exhausted { file: String, line: usize, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Runtime { .. } => 3,
            CliError::Exhausted { .. } => 4,
        }
    }
}
