use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    Field(String),

    #[error("inversion of zero")]
    ZeroInverse,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("enumeration budget exceeded: {needed} items requested, budget is {budget}")]
    Budget { needed: String, budget: u64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("code is not almost affine: {0}")]
    NotAlmostAffine(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
