//! Library half of the `depthseg` binary. The subcommands live here so the
//! test suite can run them in-process.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use config::{ConfigArgs, PipelineConfig};
pub use error::CliError;
