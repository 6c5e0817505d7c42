use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("operation not supported in characteristic 2")]
    CharacteristicTwo,

    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,

    #[error("enumeration budget exceeded: needs {needed} elements, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("singular model: {0}")]
    SingularModel(String),

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("bad reduction at {v}: {reason}")]
    BadReduction { v: u64, reason: String },

    #[error("even-degree model: explicit Jacobian arithmetic needs an odd-degree model")]
    EvenDegreeModel,

    #[error("group invariant violated: {0}")]
    InvariantViolation(String),

    #[error("operation requires a trivial declared Mordell-Weil group")]
    NontrivialMordellWeil,

    #[error("indeterminate: {0}")]
    Indeterminate(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("invalid input: {0}")]
    Invalid(String),
}
