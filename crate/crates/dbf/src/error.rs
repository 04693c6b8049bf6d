use std::path::PathBuf;

use dbf_core::filter::FilterError;
use dbf_core::metrics::MetricsError;
use dbf_core::motion_fit::FitError;
use dbf_core::simulator::ScenarioError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error("{0}")]
    Data(String),
    #[error("metrics: {0}")]
    Metrics(#[from] MetricsError),
    #[error("fit: {0}")]
    Fit(#[from] FitError),
    #[error("scenario: {0}")]
    Scenario(#[from] ScenarioError),
    #[error("tracking: {0}")]
    Tracking(#[from] FilterError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit status: 1 usage, 2 data, 3 tracking.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Tracking(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
