//! Batch runner for scoring, metric sweeps, prompt and pocket generation and
//! policy-dynamics experiments.

pub mod args;
pub mod commands;
pub mod error;
pub mod files;
pub mod provenance;
pub mod score;

pub use args::Cli;
pub use commands::run;
pub use error::CliError;
