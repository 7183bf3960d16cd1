//! Process-level errors and their exit codes.
//!
//! Exit code contract: 0 success, 1 usage error (bad flags or subcommand),
//! 2 data error (unreadable, malformed, or unusable input), 3 partial
//! estimator failure (the run completed but at least one pair's estimate
//! failed; the failures are recorded in the output).

use std::fmt;

/// Exit status for a run where every requested estimate succeeded.
pub const EXIT_OK: u8 = 0;
/// Exit status for command-line usage errors.
pub const EXIT_USAGE: u8 = 1;
/// Exit status for input-data errors.
pub const EXIT_DATA: u8 = 2;
/// Exit status when some, but not necessarily all, pair estimates failed.
pub const EXIT_PARTIAL: u8 = 3;

/// A fatal error that aborts the run (as opposed to per-pair estimator
/// failures, which are reported inside the output records).
#[derive(Debug)]
pub enum CliError {
    /// The flags or their values are unusable.
    Usage(String),
    /// The input data cannot be read or does not satisfy the input contract.
    Data(String),
    /// Reading or writing a file failed.
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(msg) => write!(f, "data error: {msg}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    /// The exit status this error maps to.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) | CliError::Io(_) => EXIT_DATA,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        assert_eq!(CliError::Data("x".into()).exit_code(), 2);
        let io = CliError::Io(std::io::Error::other("x"));
        assert_eq!(io.exit_code(), 2);
    }

    #[test]
    fn messages_carry_their_category() {
        assert!(CliError::Usage("bad".into()).to_string().starts_with("usage error"));
        assert!(CliError::Data("bad".into()).to_string().starts_with("data error"));
    }
}
