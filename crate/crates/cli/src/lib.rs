//! Library side of the `dcurv` command-line tool: the `plfsurf` surface
//! format, OBJ import, report formatting and the command implementations.

pub mod commands;
pub mod error;
pub mod format;
pub mod numfmt;
pub mod obj;

pub use error::{exit, CliError, Result};
