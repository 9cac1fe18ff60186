use thiserror::Error;

/// A location inside a text document, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: Pos, msg: String },
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("invalid search space: {0}")]
    Spec(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("oracle guard exceeded: {count} raw candidates (limit {limit})")]
    OracleGuard { count: u128, limit: u128 },
    #[error("cycle detected in slice order")]
    SliceCycle,
    #[error("simulation error: {0}")]
    Simulation(String),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos: Pos { line, col },
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
