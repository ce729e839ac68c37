//! File format, reports and subcommands behind the `probaccept` binary.

pub mod commands;
pub mod error;
pub mod format;
pub mod report;

pub use error::CliError;
