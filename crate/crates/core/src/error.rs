use thiserror::Error;

use crate::instance::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid instance: {}", join_violations(.0))]
    Validation(Vec<Violation>),

    #[error("{what} = {value} exceeds the configured cap {cap}")]
    CapExceeded { what: String, value: String, cap: String },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("name collision: {0}")]
    NameCollision(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
