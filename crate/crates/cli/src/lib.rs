//! Batch front-end for the `padic-exceptional` constructions: instance
//! files in, coefficient dumps and JSON reports out.

pub mod commands;
pub mod instance;
pub mod json;
pub mod output;

pub use commands::{run, CliError, Command, Flags, Outcome};
pub use instance::{Instance, SchemaError};
