use std::io;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration or parameter value.
    #[error("configuration error: {0}")]
    Config(String),
    /// The requested construction does not exist for these dimensions.
    #[error("capability error: {0}")]
    Capability(String),
    /// Argument outside the domain of a function (e.g. a pole).
    #[error("domain error: {0}")]
    Domain(String),
    /// Non-finite or otherwise unusable intermediate value.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Too many channel realizations failed during a sweep.
    #[error("numeric failure budget exceeded: {skipped} of {total} realizations skipped")]
    FailureBudget { skipped: usize, total: usize },
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the CLI for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Capability(_) | Error::Domain(_) => 2,
            Error::Io(_) | Error::Csv(_) => 3,
            Error::Numeric(_) | Error::FailureBudget { .. } => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
