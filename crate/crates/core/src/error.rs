use thiserror::Error;

pub type Result<T> = std::result::Result<T, SpectraError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("polynomial is not squarefree")]
    NonSquarefree,

    #[error("exact Z[q] arithmetic needs a monic minimal polynomial")]
    ExactModeUnavailable,

    #[error("input may be reducible: {0}")]
    MaybeReducible(String),

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("classification inconclusive after {bits} bits of precision")]
    Inconclusive { bits: u32 },

    #[error("capacity condition fails: m * sum_(i in P) q^-i = {capacity:.6} < 1")]
    CapacityViolated { capacity: f64 },

    #[error("horizon {horizon} too short to decide: {what}")]
    HorizonTooShort { horizon: usize, what: String },

    #[error("q-value of the digit string is not zero (~{value:.3e})")]
    NonzeroValue { value: f64 },
}

impl SpectraError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            SpectraError::BudgetExhausted(_) | SpectraError::HorizonTooShort { .. } => 3,
            SpectraError::Inconclusive { .. } => 4,
            _ => 2,
        }
    }
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(SpectraError::Precondition(msg.into()))
}
