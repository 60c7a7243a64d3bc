use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid constellation: {0}")]
    InvalidConstellation(String),

    #[error("invalid ground site: {0}")]
    InvalidSite(String),

    #[error("{path}: line {line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("{0}: file contains no samples")]
    EmptySeries(PathBuf),

    #[error("{path}: line {line}: time {t} does not increase over previous sample")]
    NonMonotoneTime { path: PathBuf, line: usize, t: f64 },

    #[error("t = {t} s precedes the first radiation sample at {first} s")]
    BeforeFirstSample { t: f64, first: f64 },

    #[error("horizon must be positive, got {0}")]
    NonPositiveHorizon(f64),

    #[error("weights must be nonnegative and not all zero")]
    DegenerateWeights,

    #[error("empty site distribution")]
    EmptyDistribution,

    #[error("at least 2 user cells are required to pair flows, got {0}")]
    TooFewCells(usize),

    #[error("config: {key}: {msg}")]
    Config { key: String, msg: String },

    #[error("calibration infeasible: {0}")]
    Infeasible(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            msg: msg.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
