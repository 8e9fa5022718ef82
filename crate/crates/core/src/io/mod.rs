//! Configuration and output files.

pub mod config;
pub mod output;

pub use config::{parse_config, parse_config_str, RunConfig};
pub use output::{write_outputs, Artifacts, Manifest};
