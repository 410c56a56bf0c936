//! Command-line front end for `beamsign`: problem files, an expression
//! language for `c(t)` and `h(t)`, and the `spectrum`, `check`, `solve`,
//! `verify`, `greens` and `sweep` commands.

pub mod commands;
pub mod config;
mod error;
pub mod expr;

pub use error::{CliError, CliResult};
