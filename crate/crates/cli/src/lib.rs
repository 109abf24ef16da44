//! Library half of the command-line front end: configuration files, series
//! and manifest persistence, and the subcommand implementations.

pub mod commands;
pub mod config_file;
pub mod manifest;
pub mod series_io;

/// Operational error: bad flags, bad config, unreadable files. Maps to exit
/// code 2.
#[derive(Debug, Clone)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

/// Process exit codes.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    pub const CHECK_FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const TRUNCATED: i32 = 3;
}
