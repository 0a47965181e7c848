use std::path::PathBuf;

use discrete_curvature::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const INVALID_METRIC: u8 = 3;
    pub const NOT_CONVERGED: u8 = 4;
    pub const DIVERGED: u8 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: line {line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } => exit::IO,
            CliError::Core(e) => match e {
                CoreError::InvalidLength { .. }
                | CoreError::TriangleInequality { .. }
                | CoreError::InvalidTriangle(..)
                | CoreError::NotDelaunay { .. }
                | CoreError::FlipLimit { .. }
                | CoreError::DegenerateFlip { .. }
                | CoreError::AreaUnderflow(_) => exit::INVALID_METRIC,
                CoreError::IterationLimit { .. } | CoreError::LineSearch { .. } => exit::NOT_CONVERGED,
                CoreError::Divergence { .. } => exit::DIVERGED,
                _ => exit::USAGE,
            },
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
