use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;
pub const EXIT_PRECONDITION: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}", fmt_parse(.line, .message))]
    Parse { line: Option<usize>, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] almost_core::Error),
    /// A benchmark instance left the interval `[1, 2]`.
    #[error("instance {index}: ratio {ratio} outside [1, 2]")]
    RatioOutOfRange { index: u64, ratio: String },
    #[error("cannot write output: {0}")]
    Output(String),
}

fn fmt_parse(line: &Option<usize>, message: &str) -> String {
    match line {
        Some(l) => format!("line {l}: {message}"),
        None => message.to_string(),
    }
}

impl CliError {
    pub fn parse(line: Option<usize>, message: impl Into<String>) -> Self {
        CliError::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        use almost_core::Error as E;
        match self {
            CliError::Parse { .. } | CliError::Core(E::ParseRational(_)) => EXIT_PARSE,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(E::LimitExceeded { .. }) => EXIT_LIMIT,
            CliError::Core(E::Precondition(_)) => EXIT_PRECONDITION,
            _ => EXIT_OTHER,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
