use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown scenario `{0}` (expected divergent_series, empty_interior or empty_fixset)")]
    UnknownScenario(String),
    #[error("unknown {what} `{value}`")]
    UnknownName { what: &'static str, value: String },
    #[error("invalid table spec: {0}")]
    InvalidSpec(String),
    #[error("invalid config line {line}: {reason}")]
    Config { line: usize, reason: String },
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error(transparent)]
    Solver(#[from] cutter_core::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl From<csv::Error> for BenchError {
    fn from(e: csv::Error) -> Self {
        BenchError::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
