use thiserror::Error;

pub type Result<T> = std::result::Result<T, OracleError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{what} on {qubits} qubits exceeds the dense limit of {max}")]
    TooLarge { what: &'static str, qubits: usize, max: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("measurement outcome has zero probability: {0}")]
    ImpossibleOutcome(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] ghz_distill::Error),
}
