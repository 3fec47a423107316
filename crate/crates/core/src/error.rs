use std::path::PathBuf;

use thiserror::Error;

/// Broad failure class, used by the command-line front end to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported audio format: {0}")]
    UnsupportedFormat(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("signal too short: {samples} samples, need at least {required}")]
    TooShort { samples: usize, required: usize },

    #[error("sequence of length {len} is shorter than the {states} model states")]
    SequenceTooShort { len: usize, states: usize },
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("empty observation sequence")]
    EmptySequence,
    #[error("no legal left-to-right path for {len} frames through {states} states")]
    NoLegalPath { len: usize, states: usize },
    #[error("numerical underflow: {0}")]
    NumericalUnderflow(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("length mismatch: state path has {path} frames, prosodic track has {track}")]
    LengthMismatch { path: usize, track: usize },
    #[error("illegal state path: {0}")]
    IllegalPath(String),
    #[error("invalid fusion weight {0}, must lie in [0, 1]")]
    InvalidAlpha(f64),

    #[error("model bank has no {0} models")]
    EmptyBank(&'static str),
    #[error("unknown emotion `{0}`")]
    UnknownEmotion(String),
    #[error("unknown speaker `{0}`")]
    UnknownSpeaker(String),

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },
    #[error("duplicate utterance key {0}")]
    DuplicateUtterance(String),
    #[error("unknown label `{value}` for field {field}")]
    UnknownLabel { field: &'static str, value: String },
    #[error("feature dimension {0} has zero variance on the training set")]
    DegenerateDimension(usize),
    #[error("invalid corpus settings: {0}")]
    InvalidSpec(String),
    #[error("missing features for utterance `{0}`")]
    MissingFeatures(String),

    #[error("no results to evaluate")]
    EmptyResults,
    #[error("invalid pooled sample size {0}")]
    InvalidN(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(context: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.to_string(),
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NumericalUnderflow(_) => ErrorClass::Numerical,
            Error::InvalidAlpha(_) | Error::InvalidSpec(_) | Error::InvalidN(_) => {
                ErrorClass::Config
            }
            _ => ErrorClass::Data,
        }
    }
}
