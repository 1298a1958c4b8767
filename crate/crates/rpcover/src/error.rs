use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what}: estimated work {estimated} exceeds budget {budget} (set RPCOVER_BUDGET to raise)")]
    BudgetExceeded {
        what: String,
        estimated: u64,
        budget: u64,
    },

    #[error("operation requires a {expected} covering, got {actual}")]
    WrongRegime { expected: String, actual: String },

    #[error("graph parse error at line {line}: {message}")]
    GraphParse { line: usize, message: String },

    #[error("persisted structure is inconsistent: {0}")]
    Corrupt(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
