use std::fmt;
use std::process::ExitCode;

use fair_alloc::algorithms::Status;

/// Process exit codes.
pub mod code {
    pub const OK: u8 = 0;
    /// Anything not covered below, e.g. a zero-sum row refused by the MILP
    /// export.
    pub const FAILURE: u8 = 1;
    /// Command-line usage error (also what clap exits with).
    pub const USAGE: u8 = 2;
    pub const INFEASIBLE_INPUT: u8 = 3;
    pub const REPAIR_INCOMPLETE: u8 = 4;
    pub const PARSE: u8 = 5;
    pub const IO: u8 = 6;
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    /// An input file exists but its contents are unusable.
    Parse(fair_alloc::Error),
    Core(fair_alloc::Error),
    /// The run finished but the algorithm did not produce a feasible result.
    Status(Status),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => code::USAGE,
            CliError::Parse(fair_alloc::Error::Io { .. }) | CliError::Core(fair_alloc::Error::Io { .. }) => code::IO,
            CliError::Parse(_) => code::PARSE,
            CliError::Core(e) => match e {
                fair_alloc::Error::Parse { .. } | fair_alloc::Error::Solution(_) => code::PARSE,
                fair_alloc::Error::Csv(_) => code::IO,
                fair_alloc::Error::UnknownInstance(_)
                | fair_alloc::Error::InvalidParameter(_)
                | fair_alloc::Error::InvalidBounds(_) => code::USAGE,
                _ => code::FAILURE,
            },
            CliError::Status(Status::InfeasibleInput) => code::INFEASIBLE_INPUT,
            CliError::Status(Status::RepairIncomplete) => code::REPAIR_INCOMPLETE,
            CliError::Status(Status::Success) => code::OK,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Parse(e) | CliError::Core(e) => write!(f, "{e}"),
            CliError::Status(s) => write!(f, "allocation status: {s}"),
        }
    }
}

impl From<fair_alloc::Error> for CliError {
    fn from(e: fair_alloc::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<CliError> for ExitCode {
    fn from(e: CliError) -> Self {
        ExitCode::from(e.exit_code())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn io_error(path: &std::path::Path, source: std::io::Error) -> CliError {
    CliError::Core(fair_alloc::Error::Io { path: path.to_path_buf(), source })
}
