//! Experiment runner for the BD-RIS simulation core: TOML run
//! configurations, CSV result tables with metadata sidecars, run manifests,
//! and the `bdris` command-line tool.

pub mod config;
pub mod error;
pub mod experiments;
pub mod io;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use experiments::{execute, run, Experiment, Outcome, RunOptions, RunReport};
