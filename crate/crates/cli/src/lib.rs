//! Command implementations behind the `esdlab` binary.

pub mod args;
pub mod commands;
pub mod format;
pub mod verify;

use std::fmt;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    VerificationFailure = 1,
    Usage = 2,
    InternalInconsistency = 3,
}

/// A command failure carrying its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: ExitCode,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::Usage,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::InternalInconsistency,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::VerificationFailure,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

impl From<esdlab::Error> for Failure {
    fn from(e: esdlab::Error) -> Self {
        Failure::usage(e.to_string())
    }
}
