use std::path::PathBuf;

use probaccept_core::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{}`: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write `{}`: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    /// `line` is 1-based; 0 marks a problem with the file as a whole.
    #[error("{}{message}", if *line == 0 { String::new() } else { format!("line {line}: ") })]
    Format { line: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 3 for a broken internal invariant, 2 for anything the input caused.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Invariant(_)) => 3,
            _ => 2,
        }
    }
}
