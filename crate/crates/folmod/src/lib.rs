//! Definition files, expression parsing, reports and the `folmod` command
//! line on top of `folmod-core`.

pub mod cli;
pub mod defs;
pub mod expr;
pub mod report;
pub mod sample;

pub use cli::{run, Outcome};
