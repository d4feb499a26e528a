use thiserror::Error;

/// Errors raised by the distance engines and file loaders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A letter is not part of the metric's alphabet.
    #[error("unknown letter {0}")]
    UnknownLetter(String),

    /// An operation that needs nonempty strings received an empty one.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// A metric definition violates the metric axioms or is malformed.
    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    /// A tree is malformed or not well-separated.
    #[error("invalid tree: {0}")]
    InvalidTree(String),

    /// A warping path does not describe a correspondence between the inputs.
    #[error("invalid correspondence: {0}")]
    InvalidCorrespondence(String),

    /// A numeric parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A brute-force oracle was asked to enumerate beyond its size guard.
    #[error("oracle guard exceeded: {0}")]
    GuardExceeded(String),

    /// Input text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by malformed input data (as opposed to a violated precondition).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::UnknownLetter(_) | Error::InvalidMetric(_) | Error::InvalidTree(_) | Error::Parse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
