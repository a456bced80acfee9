//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Expression text failed to parse. `pos` is a byte offset into the input.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Variable index out of range for the declared dimension.
    #[error("variable index {index} out of range for dimension n={n}")]
    VariableRange { index: usize, n: usize },

    /// Domain data violated a structural requirement.
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    /// A hypothesis of the method failed at the given point.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// An iterative procedure failed to settle within its budget.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Inputs are structurally fine but outside what this operation handles.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
