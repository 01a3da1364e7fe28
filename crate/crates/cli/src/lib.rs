//! Command implementations and report formatting for the `bellks` binary.

pub mod commands;
pub mod report;

pub use commands::CliError;
pub use report::{Number, Report, Status};
