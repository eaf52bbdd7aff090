//! Command-line layer over `qselect-core`: file formats, experiment sweeps,
//! verification and the `qselect` commands.

pub mod checks;
pub mod commands;
pub mod config;
pub mod dto;
pub mod error;
pub mod experiment;
pub mod format;
pub mod pipeline;

pub use error::{CliError, Result};
