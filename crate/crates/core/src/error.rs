use std::io;
use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("image contains no black pixel")]
    EmptyImage,
    #[error("rectangle ({top},{left})-({bottom},{right}) exceeds a {height}x{width} image")]
    OutOfBounds {
        top: usize,
        left: usize,
        bottom: usize,
        right: usize,
        height: usize,
        width: usize,
    },
    #[error("class {class} has only {count} sample(s); at least 2 are required to split")]
    ClassTooSmall { class: usize, count: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("training data contains a single class")]
    SingleClass,
    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("confusion matrix has no populated row")]
    EmptyMatrix,
    #[error("confusion matrix row {0} is empty")]
    EmptyRow(usize),
    #[error("{requested} classes requested but only {available} glyph templates exist")]
    TooManyClasses { requested: usize, available: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {msg}")]
    Format { path: String, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn format(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            msg: msg.into(),
        }
    }
}
