//! Command-line front end: the input format, report rendering and the
//! commands themselves.

pub mod input;
pub mod report;
pub mod run;

pub use input::{ExampleSpec, ParseError};
pub use report::Report;
pub use run::{execute, run, Cli, Command};
