use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed grid, interval or problem data.
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A transcendental threshold could not be bracketed.
    #[error("root search failed: {0}")]
    SearchFailure(String),

    /// The operator is singular (or numerically so) because `c` meets an
    /// eigenvalue `-lambda_k` of `T[p,0]`.
    #[error("resonance: operator is singular near eigenvalue lambda_{k} = {eigenvalue}")]
    Resonance { k: usize, eigenvalue: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (last ratio {last_ratio})")]
    NonConvergence { iterations: usize, last_ratio: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SearchFailure(_) | Error::Resonance { .. } | Error::NonConvergence { .. }
        )
    }
}
