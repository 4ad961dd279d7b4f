use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sub-band of zero width cannot carry rate {rate_bps} b/s")]
    InfeasibleBand { rate_bps: f64 },

    #[error("link cannot support a positive rate at the target error probability")]
    InfeasibleLink,

    #[error("ratio is undefined for a zero denominator ({0})")]
    UndefinedRatio(&'static str),

    #[error("chain has no unique stationary distribution")]
    NoUniqueStationary,

    #[error("expected number of frames diverges for zero success probability")]
    Divergence,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}:{line}: {message}", path = path.display())]
    Config {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("run failed at {coordinates}: {source}")]
    AtGridPoint {
        coordinates: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}", path = path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
