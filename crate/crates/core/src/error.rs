use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// One of the cutoff inequalities `0 < a*h_min <= a*h_min*b <= 1 <= b` failed.
    #[error("cutoff constraint violated: {0}")]
    Constraint(String),

    #[error("quadrature did not converge (estimate {estimate:e}, error bound {error_bound:e})")]
    Quadrature { estimate: f64, error_bound: f64 },

    #[error("series did not converge after {terms} terms")]
    Series { terms: usize },

    #[error("cross-check failed: {0}")]
    CrossCheck(String),

    #[error("naive generator refuses n = {n} (cap {cap})")]
    TooLarge { n: usize, cap: usize },

    #[error("invalid graph: {0}")]
    Graph(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
