//! Library side of the `posat` command-line tool, so the commands can be
//! driven in-process by tests.

pub mod cache;
pub mod commands;
pub mod report;

pub use commands::{run, Cli, Command, Outcome};
pub use report::{Format, Report, Status};
