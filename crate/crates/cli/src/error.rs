use thiserror::Error;

/// Exit status for malformed invocations (`EX_USAGE`).
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_FAILURE: u8 = 1;
/// A batch completed but contains imputed values.
pub const EXIT_IMPUTED: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] trunclc::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use trunclc::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(
                E::UnknownFamily(_)
                | E::InvalidParameter { .. }
                | E::MissingParameter { .. }
                | E::UnexpectedParameter { .. }
                | E::InvalidInterval(_),
            ) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
