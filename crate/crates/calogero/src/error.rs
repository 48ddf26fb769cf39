use thiserror::Error;

/// Failures of a run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid configuration or model parameters (exit 2).
    #[error("configuration error: {0}")]
    Config(String),
    /// A numerical routine failed (exit 3).
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<calogero_core::Error> for CliError {
    fn from(e: calogero_core::Error) -> Self {
        use calogero_core::Error as E;
        match e {
            E::Domain(_) | E::Validation(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}
