use thiserror::Error;

/// Errors raised by the numerical kernel, the operator layer and the
/// certificate layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {arg} = {value} ({reason})")]
    Domain {
        arg: &'static str,
        value: f64,
        reason: String,
    },

    #[error("pole proximity: {condition} has margin {margin:e} (required > {required:e})")]
    PoleProximity {
        condition: String,
        margin: f64,
        required: f64,
    },

    #[error("{series} did not converge within {terms} terms (tail {tail:e})")]
    NonConvergence {
        series: String,
        terms: usize,
        tail: f64,
    },

    #[error("normalization error: a_1 = {0}, expected 1")]
    Normalization(f64),

    #[error("{theorem} requires parameter {name}")]
    MissingParameter { theorem: String, name: &'static str },

    #[error("unsupported theorem: {0}")]
    UnsupportedTheorem(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(arg: &'static str, value: f64, reason: impl Into<String>) -> Self {
        Error::Domain {
            arg,
            value,
            reason: reason.into(),
        }
    }
}
