use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ghz_distill::Error),
    #[error(transparent)]
    Oracle(#[from] ghz_oracle::OracleError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// 2 for usage and input errors, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        use ghz_distill::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Parse(_) | E::FileParse { .. } | E::Io { .. } | E::InvalidConfig(_)) => 2,
            CliError::Core(
                E::Anticommuting(..) | E::Dependent(_) | E::ContainsMinusIdentity | E::NotHermitian(_),
            ) => 2,
            _ => 1,
        }
    }
}
