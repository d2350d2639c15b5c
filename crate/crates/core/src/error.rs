use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Pauli character {found:?} at position {position} (expected I, X, Y or Z)")]
    InvalidPauliChar { position: usize, found: char },

    #[error("empty Pauli string")]
    EmptyPauli,

    #[error("invalid syndrome character {found:?} at position {position} (expected 0 or 1)")]
    InvalidSyndromeChar { position: usize, found: char },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("qubit index {index} out of range 1..={n}")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("{0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid channel: {0}")]
    Channel(String),

    #[error("syndrome is infeasible under the channel (no error with nonzero probability)")]
    InfeasibleSyndrome,

    #[error("exhaustive search over {n} qubits refused (limit is {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
