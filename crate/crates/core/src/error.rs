use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Stream(#[from] io::Error),

    #[error("empty embedding file")]
    EmptyFile,

    #[error("malformed header at line {line}: {reason}")]
    BadHeader { line: usize, reason: String },

    #[error("dimension mismatch at line {line}: expected {expected} components, found {found}")]
    DimensionMismatch { line: usize, expected: usize, found: usize },

    #[error("header declares {declared} vectors but {found} were read")]
    CountMismatch { declared: usize, found: usize },

    #[error("duplicate token `{token}` at line {line}")]
    DuplicateToken { token: String, line: usize },

    #[error("non-numeric field `{field}` at line {line}")]
    NonNumeric { field: String, line: usize },

    #[error("unknown token `{0}`")]
    UnknownToken(String),

    #[error("word id {id} out of range for a space of {len} points")]
    InvalidId { id: usize, len: usize },

    #[error("point {0} is a zero vector; similarity is undefined")]
    ZeroVector(usize),

    #[error("vector dimensions differ: {0} vs {1}")]
    DimensionDiffers(usize, usize),

    #[error("identical endpoints: {0}")]
    SamePoint(usize),

    #[error("need at least {needed} points, have {have}")]
    TooFewPoints { needed: usize, have: usize },

    #[error("requested {requested} samples but only {available} are available")]
    SampleTooLarge { requested: usize, available: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("co-occurrence counts are empty")]
    EmptyCounts,

    #[error("empty vocabulary after reading {}", .0.display())]
    EmptyVocabulary(PathBuf),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown word `{word}`{}", .suggestion.as_ref().map(|s| format!("; did you mean `{s}`?")).unwrap_or_default())]
    UnknownWord { word: String, suggestion: Option<String> },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
