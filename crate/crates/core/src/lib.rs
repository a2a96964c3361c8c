//! Numerical laboratory for two-dimensional minimal surface graphs in `ℝⁿ`.

pub mod acceptance;
pub mod conformal;
pub mod curvature;
pub mod error;
pub mod estimate;
pub mod expr;
pub mod harmonic;
pub mod jet;
pub mod linalg;
pub mod quadrature;
pub mod report;
pub mod surface;

pub use error::{Error, Result};

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
