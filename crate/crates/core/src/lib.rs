// Negated comparisons are used on purpose so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificate;
pub mod config;
pub mod error;
pub mod lemma;
pub mod operator;
pub mod scan;
pub mod specfun;
pub mod summation;
pub mod verify;

pub use config::EvalConfig;
pub use error::{Error, Result};
pub use summation::SeriesValue;
