use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),

    #[error("resource cap: {0}")]
    Cap(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// Process exit code: 2 for bad configuration, 3 for an exceeded cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Io(_) | CliError::Failed(_) => 1,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
}

impl From<hyperlab::Error> for CliError {
    fn from(e: hyperlab::Error) -> Self {
        use hyperlab::Error as E;
        match e {
            E::InstanceTooLarge { .. } | E::BudgetExhausted(_) | E::EnumerationGuard { .. } | E::TruncatedTree => {
                CliError::Cap(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}
