//! Ingestion, configuration and report emission behind the `lric-net` binary.

pub mod cli;
pub mod config;
pub mod io;
pub mod pipeline;
pub mod report;

pub use cli::{run, Cli};
