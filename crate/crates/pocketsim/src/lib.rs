//! File formats and dataset import for `pocketsim-core` traces.
//!
//! Traces are stored as CSV with a `#key=value` metadata header; times in
//! the body are integer seconds. Configurations are flat `key=value` files.

pub mod cli;
pub mod config_file;
mod error;
pub mod import;
pub mod tables;
pub mod trace_file;

pub use config_file::{load_config, read_config, write_config};
pub use error::{PersistError, Result};
pub use import::{import_contacts, ImportSpec};
pub use trace_file::{read_trace, validate_trace, write_trace, ValidationReport};
