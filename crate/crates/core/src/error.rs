use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge after {panels} panels (value {value:e}, estimated error {est_error:e})")]
    NonConvergent {
        value: f64,
        est_error: f64,
        panels: usize,
    },

    #[error("shape unknown: {0}")]
    ShapeUnknown(String),

    #[error("no derivative: {0}")]
    NoDerivative(String),

    #[error("invalid weight: {0}")]
    WeightInvalid(String),

    #[error("negative function: {0}")]
    NegativeFunction(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
