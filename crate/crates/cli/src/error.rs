use friable_core::{ArithError, SieveError, SpecFnError};

/// Anything that stops a command before it produces output. All of these map
/// to exit code 2; verification failures are reported through
/// [`crate::Output::failures`] instead.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    SpecFn(#[from] SpecFnError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Sieve(#[from] SieveError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}
