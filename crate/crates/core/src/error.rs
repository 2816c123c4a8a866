use thiserror::Error;

/// Errors raised by the exact p-adic machinery.
///
/// Every variant maps onto one of the coarse [`ErrorClass`]es used by the
/// command-line front-end to choose an exit status.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime {0}: expected a prime number >= 2")]
    InvalidPrime(u64),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("valuations {0} and {1} are incommensurable (differ by a non-integer)")]
    IncommensurableValuations(String, String),
    #[error("point lies outside the radius of convergence: {0}")]
    OutsideRadius(String),
    #[error("series carries no tail bound; tail is unknown")]
    MissingTailBound,
    #[error("tail unresolved: {0}")]
    UnresolvedTail(String),
    #[error("precision exhausted: achieved residual weight {0}")]
    PrecisionExhausted(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("point is not in the exceptional set: {0}")]
    NotInS(String),
    #[error("point lies in the exceptional set: {0}")]
    NotOutsideS(String),
    #[error("no representable target member: {0}")]
    EmptyTarget(String),
    #[error("set is not closed under conjugation: {0}")]
    NotClosed(String),
    #[error("divisibility undecided at precision {0}")]
    DivisibilityUndecided(String),
}

/// Coarse classification of [`Error`]s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Precondition,
    Budget,
    Undecided,
}

impl Error {
    /// Stable, machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidPrime(_) => "invalid-prime",
            Error::PrimeMismatch(..) => "prime-mismatch",
            Error::InsufficientPrecision(_) => "insufficient-precision",
            Error::Unsupported(_) => "unsupported-input",
            Error::DivisionByZero => "division-by-zero",
            Error::Precondition(_) => "precondition-violation",
            Error::IncommensurableValuations(..) => "incommensurable-valuations",
            Error::OutsideRadius(_) => "outside-radius",
            Error::MissingTailBound => "missing-tail-bound",
            Error::UnresolvedTail(_) => "unresolved-tail",
            Error::PrecisionExhausted(_) => "precision-exhausted",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::NotInS(_) => "not-in-S",
            Error::NotOutsideS(_) => "not-outside-S",
            Error::EmptyTarget(_) => "empty-target",
            Error::NotClosed(_) => "not-conjugation-closed",
            Error::DivisibilityUndecided(_) => "divisibility-undecided-at-precision",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::BudgetExceeded(_) => ErrorClass::Budget,
            Error::InsufficientPrecision(_)
            | Error::UnresolvedTail(_)
            | Error::PrecisionExhausted(_)
            | Error::DivisibilityUndecided(_) => ErrorClass::Undecided,
            _ => ErrorClass::Precondition,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
