//! Command-line front end: run files, a thread-pool executor, and CSV/JSON
//! outputs stamped with a [`output::RunManifest`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod config;
pub mod exec;
pub mod grammar;
pub mod output;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("cannot parse {0}: {1}")]
    Parse(String, String),
    #[error("{0}")]
    Grammar(String),
    #[error("{0}")]
    Invalid(String),
}
