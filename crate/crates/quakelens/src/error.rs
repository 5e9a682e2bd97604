use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("bad timestamp {value:?}, expected \"YYYY-MM-DD HH:MM\"")]
    BadTimestamp { value: String },

    #[error("duplicate post id {id:?} in corpus (corrupt export)")]
    DuplicateId { id: String },

    #[error("delimited input is missing column {column:?}")]
    MissingColumn { column: String },

    #[error("malformed record in {path}: {detail}")]
    MalformedFile { path: PathBuf, detail: String },

    #[error("empty term in {what}")]
    EmptyTerm { what: &'static str },

    #[error("dictionary is empty")]
    EmptyDictionary,

    #[error("post {id:?} at {at} falls outside the analysis window")]
    OutOfWindow { id: String, at: String },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("degenerate training set: class {class:?} has no documents")]
    DegenerateTrainingSet { class: &'static str },

    #[error("degenerate training set: no tokens in any document")]
    EmptyVocabulary,

    #[error("smoothing constant must be a finite positive number, got {0}")]
    BadAlpha(f64),

    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),

    #[error("invalid sentiment model: {0}")]
    InvalidModel(String),

    #[error("{stage} stage failed")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap an I/O failure with the path that triggered it.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Wrap this error with a pipeline stage label.
    pub fn at_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
