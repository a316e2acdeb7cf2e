use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FaddeevaError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("z = {re:e}{im:+e}i is outside the domain: {reason}")]
    Domain { re: f64, im: f64, reason: &'static str },

    #[error("exp(-z^2) is not representable at z = {re:e}{im:+e}i")]
    Overflow { re: f64, im: f64 },

    #[error("element {index}: {source}")]
    AtIndex {
        index: usize,
        #[source]
        source: Box<FaddeevaError>,
    },
}

impl FaddeevaError {
    pub(crate) fn at(self, index: usize) -> Self {
        FaddeevaError::AtIndex { index, source: Box::new(self) }
    }

    /// Index of the offending element for batch errors.
    pub fn index(&self) -> Option<usize> {
        match self {
            FaddeevaError::AtIndex { index, .. } => Some(*index),
            _ => None,
        }
    }
}

pub type Result<T, E = FaddeevaError> = std::result::Result<T, E>;
