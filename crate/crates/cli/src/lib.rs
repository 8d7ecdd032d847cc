//! Command-line front end and HTTP propagation service.

pub mod cli;
pub mod service;

pub use cli::{run_cli, ExitCode};
