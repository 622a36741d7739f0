use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A size or parameter outside the supported range.
    #[error("configuration error: {0}")]
    Config(String),

    /// Arguments that are inconsistent with each other (dimension mismatch and the like).
    #[error("usage error: {0}")]
    Usage(String),

    #[error("reference integrator did not converge: {0}")]
    Convergence(String),

    #[error("instance {0} has no ground-state record; run solve first")]
    Unsolved(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
