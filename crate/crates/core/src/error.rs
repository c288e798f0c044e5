use thiserror::Error;

use crate::coverage::CoverageReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computed object violates an invariant it is guaranteed to satisfy.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The falsification search found no witness with coverage below the level.
    #[error("no coverage witness below {beta} found; best coverage {}", .report.min_coverage)]
    NotFalsified {
        beta: f64,
        report: Box<CoverageReport>,
    },
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
