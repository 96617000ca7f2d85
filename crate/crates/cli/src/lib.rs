//! Library half of the `acore` command: instance files, JSON reports and
//! the command implementations.

pub mod commands;
pub mod error;
pub mod instance;
pub mod report;

pub use error::{CliError, Result};
pub use instance::Instance;
