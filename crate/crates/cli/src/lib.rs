//! Batch driver for the `subdiff` library: special-function tables, problem
//! solves, convergence runs and the trace and stability studies. Every command
//! produces a CSV table whose first line echoes the full configuration.

pub mod commands;
pub mod error;
pub mod problem;
pub mod studies;
pub mod table;

pub use commands::{run, Cli, Command, Report};
pub use error::{CliError, CliResult};
