use thiserror::Error;

/// Errors raised across the geometry pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("arity error: {0}")]
    Arity(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("ill-conditioned normal basis (Gram determinant {gram_det:e})")]
    Conditioning { gram_det: f64 },

    #[error("degenerate geometry: {0}")]
    Geometry(String),

    #[error("numerical consistency failure: discriminant {discriminant:e} below clamp window")]
    Consistency { discriminant: f64 },

    #[error("not converged after {iterations} iterations (best conformality residual {best_residual:e})")]
    Convergence {
        best_residual: f64,
        iterations: usize,
    },

    #[error("aliasing: {samples} boundary samples cannot resolve {modes} modes")]
    Aliasing { samples: usize, modes: usize },

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
