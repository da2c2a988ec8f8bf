//! IO, file formats and the command-line front end for `goodwin-core`.

pub mod cli;
pub mod commands;
pub mod data;
pub mod output;

pub use cli::Cli;
pub use commands::run;
