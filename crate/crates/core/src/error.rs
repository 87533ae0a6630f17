use std::fmt;

/// Errors shared across the library.
///
/// The variants are grouped so a front end can map them onto coarse exit
/// classes: bad input data, violated mathematical preconditions, and
/// exhausted randomized retries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Operands live in different polynomial rings or fields.
    IncompatibleRings(String),
    /// Exact division had a nonzero remainder.
    NotDivisible,
    /// Division by zero (field element or polynomial).
    DivisionByZero,
    /// A mathematical precondition of an operation is violated
    /// (empty support, zero mixed volume, non-square system, ...).
    Precondition(String),
    /// Input exceeds a supported dimension or size cap.
    Unsupported(String),
    /// A randomized construction failed for every retry budgeted.
    RetriesExhausted { stage: &'static str, last_seed: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::IncompatibleRings(msg) => write!(f, "incompatible rings: {msg}"),
            Error::NotDivisible => write!(f, "not exactly divisible"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::RetriesExhausted { stage, last_seed } => {
                write!(f, "retries exhausted in {stage} (last seed state {last_seed})")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
