//! Command-line front end: run decks to CSV and SVG, check decks, and emit
//! the bundled examples.

pub mod catalog;
pub mod commands;
pub mod csv;
pub mod numfmt;
pub mod svg;
pub mod table;

pub use commands::{cmd_check, cmd_examples, cmd_run, CliError, RunConfig};
