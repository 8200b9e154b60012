//! Command-line driver for `farkas-core`: argument handling, identity
//! configuration files and report serialisation.

mod commands;
pub mod config;
pub mod report;

pub use commands::{
    configure_threads, run, AsymptArgs, CheckArgs, Cli, CliError, Command, OutputArgs, PolyArgs, SearchArgs,
    VerifyArgs, EXIT_FAIL, EXIT_IO, EXIT_PASS, EXIT_USAGE,
};
