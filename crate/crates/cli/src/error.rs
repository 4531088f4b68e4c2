use std::fmt;
use std::process::ExitCode;

use pauliexp::Error;

/// Process exit codes. Each failure class has its own code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    /// Unreadable input, malformed file or arguments.
    Parse = 1,
    /// The term set does not close within the cap.
    ClosureExplosion = 2,
    /// Eigensolver failure, singular resolvent or other numerical breakdown.
    Numerical = 3,
    /// `verify` found a discrepancy above tolerance.
    VerifyFailed = 4,
    /// A method precondition or limit was violated (dense cap, anticommutation, contour).
    Precondition = 5,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e as u8)
    }
}

/// Failure of one stage of a command.
#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub stage: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(exit: Exit, stage: &'static str, message: impl Into<String>) -> Self {
        Self {
            exit,
            stage,
            message: message.into(),
        }
    }

    pub fn from_lib(stage: &'static str, e: Error) -> Self {
        Self::new(exit_for(&e), stage, e.to_string())
    }

    pub fn io(stage: &'static str, path: &str, e: std::io::Error) -> Self {
        Self::new(Exit::Parse, stage, format!("{path}: {e}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error [{}]: {}", self.stage, self.message)
    }
}

impl std::error::Error for CliError {}

pub fn exit_for(e: &Error) -> Exit {
    match e {
        Error::ClosureExplosion { .. } => Exit::ClosureExplosion,
        Error::NotAnticommuting { .. } | Error::DenseCapExceeded { .. } | Error::BadContour(_) => {
            Exit::Precondition
        }
        Error::SingularSystem { .. }
        | Error::Eigen(_)
        | Error::NotHermitian { .. }
        | Error::NotHermitianStructure { .. }
        | Error::NotClosed { .. }
        | Error::TermOutsideSet(_) => Exit::Numerical,
        Error::DimensionMismatch { .. }
        | Error::InvalidQubitCount(_)
        | Error::InvalidPauli { .. }
        | Error::Parse { .. }
        | Error::NotPowerOfTwo(_)
        | Error::EmbedTooLarge { .. }
        | Error::ShapeMismatch { .. }
        | Error::InvalidMatrix(_)
        | Error::Json(_)
        | Error::Io(_) => Exit::Parse,
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attaches a stage name to library results.
pub trait Stage<T> {
    fn stage(self, stage: &'static str) -> CliResult<T>;
}

impl<T> Stage<T> for pauliexp::Result<T> {
    fn stage(self, stage: &'static str) -> CliResult<T> {
        self.map_err(|e| CliError::from_lib(stage, e))
    }
}
