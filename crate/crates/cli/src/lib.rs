//! Problem files, reports and commands behind the `diolic` binary.

pub mod caps;
pub mod commands;
pub mod error;
pub mod problem;
pub mod report;

pub use caps::Caps;
pub use error::{CliError, CliResult};
pub use problem::ProblemFile;
pub use report::{Report, Verdict};
