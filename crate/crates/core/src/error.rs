use thiserror::Error;

/// Errors raised by the toolkit. Validation failures that are part of an
/// operation's normal output (fan and pair diagnostics) are reported through
/// their own diagnostic types and only become an `Error` when a caller asks
/// for a validated value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero is not an element of the torus: {0}")]
    ZeroValue(String),
    #[error("coordinate {0} is a 0-stratum, not an interior point of a 1-stratum")]
    StratumPoint(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("invalid pair: {0}")]
    InvalidPair(String),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("intersection data is not toric: {0}")]
    NotToric(String),
    #[error("malformed correspondence: {0}")]
    Correspondence(String),
    #[error("unrecognized contraction: {0}")]
    Contraction(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A validation failure that is reported rather than raised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic(pub String);

impl Diagnostic {
    pub fn new(msg: impl Into<String>) -> Self {
        Diagnostic(msg.into())
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Outcome of a validation pass.
pub type Check = std::result::Result<(), Diagnostic>;
