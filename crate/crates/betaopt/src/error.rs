//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("digit out of range for this beta")]
    DigitOutOfRange,
    #[error("invalid root bracket: {0}")]
    BracketInvalid(String),
    #[error("insufficient precision: {0}")]
    PrecisionInsufficient(String),
    #[error("comparison undecided within horizon: {0}")]
    HorizonExceeded(String),
    #[error("word is not admissible")]
    NotAdmissible,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("not a Parry word: {0}")]
    NotAParryWord(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("orbit not shadowable: {0}")]
    NotShadowable(String),
    #[error("undecidable: {0}")]
    Undecidable(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// CLI exit code mapping: 2 inconclusive, 3 precondition, 4 budget/precision.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionInsufficient(_) | Error::BudgetExceeded(_) | Error::HorizonExceeded(_) => 4,
            Error::Undecidable(_) => 2,
            _ => 3,
        }
    }
}
