use thiserror::Error;

/// Crate-wide error type. The CLI maps each variant to a distinct exit code,
/// so keep the classification stable: `Parse` for malformed input text,
/// `Validation` for well-formed input outside the supported domain,
/// `Budget` for oracle refusals, `Mismatch` for oracle disagreement.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error{}: {msg}", match line { Some(l) => format!(" at line {l}"), None => String::new() })]
    Parse { line: Option<usize>, msg: String },

    #[error("{0}")]
    Validation(String),

    #[error("budget exceeded: {work} enumeration steps needed, budget is {budget}")]
    Budget { work: u128, budget: u128 },

    #[error("oracle disagreement: {0}")]
    Mismatch(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse { line: None, msg: msg.into() }
    }

    pub fn parse_at(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line: Some(line), msg: msg.into() }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
