use thiserror::Error;

/// Errors raised by the library.
///
/// Budget errors are kept apart from every other failure: exceeding the
/// desk-scale enumeration bounds says nothing about whether a successful
/// action exists.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid name `{0}`: candidate names are strings over '0' and '1'")]
    InvalidName(String),

    #[error("invalid election: {0}")]
    InvalidElection(String),

    #[error("invalid restriction: candidate `{0}` does not appear in the preference")]
    InvalidRestriction(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("assignment has {got} bits but the formula has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },

    #[error("search budget exceeded: {0}")]
    Budget(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("formula is not in the puzzle set: {0}")]
    NotInPuzzleSet(String),

    #[error("unknown election system `{0}` (expected e1|e2|e3|e4|e5|e6|alice|plurality|random:<seed>)")]
    UnknownSystem(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
