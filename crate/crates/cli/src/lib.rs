//! Command-line front end: code loading, protocol sweeps as CSV, the worked
//! example replays and the dense identity suite.

pub mod cli;
pub mod error;
pub mod replay;
pub mod sweep;

pub use cli::{run, Cli};
pub use error::CliError;
