//! File formats, reports, subcommands and the falsification harness built
//! on `process_duality_core`.

pub mod commands;
pub mod format;
pub mod fuzz;
pub mod report;

pub use commands::{Exit, OutputFormat};
