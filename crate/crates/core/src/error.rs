use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}:{line}: {message}")]
    FileParse { path: String, line: usize, message: String },
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("operator is not Hermitian (phase exponent {0})")]
    NotHermitian(u8),
    #[error("generators {0} and {1} anticommute")]
    Anticommuting(usize, usize),
    #[error("generator {0} is dependent on earlier generators")]
    Dependent(usize),
    #[error("generators produce -I")]
    ContainsMinusIdentity,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("diagonal Clifford system is infeasible: {0}")]
    Infeasible(String),
    #[error("logical pairing matrix is singular for code {0}")]
    SingularPairing(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no decoder entry for syndrome {0}")]
    DecoderMiss(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("sign convention violated: {0}")]
    SignConvention(String),
}
