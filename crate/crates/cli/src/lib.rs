//! Command-line front end: dataset CSV ingestion, run configuration, the
//! `simulate`, `fit`, `predict`, `score` and `summarize` subcommands, and
//! their CSV and JSON outputs.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod draws;
pub mod error;
pub mod manifest;
pub mod summary;

pub use commands::dispatch;
pub use config::{ModelKind, RunConfig};
pub use dataset::{dataset_to_csv, parse_dataset_csv, parse_dataset_str, ParsedDataset};
pub use error::{CliError, ParseError};
