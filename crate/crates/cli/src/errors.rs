use std::fmt;

/// Process exit codes are part of the tool's contract:
/// 0 success (and, for `run`, every scenario aligned), 1 usage or input
/// error, 2 at least one run failed to align, 3 a simulation diverged.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable files, malformed configs or data.
    Usage(String),
    /// Errors surfaced by the simulation library.
    Sim(servobench_core::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_ALIGNED: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;

impl CliError {
    pub fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Sim(servobench_core::Error::Diverged { .. }) => EXIT_DIVERGED,
            CliError::Sim(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Sim(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<servobench_core::Error> for CliError {
    fn from(e: servobench_core::Error) -> CliError {
        CliError::Sim(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
