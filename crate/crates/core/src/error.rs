use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("field evaluation produced a non-finite value at {at:?}")]
    NonFinite { at: Vec<f64> },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error("bad catalog parameters for `{name}`: {reason}")]
    BadCatalogParameters { name: String, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("point {at:?} lies outside the closed ball of radius {radius}")]
    OutsideDomain { at: Vec<f64>, radius: f64 },

    #[error("point {at:?} is closer than one finite-difference step to the boundary of the ball of radius {radius}")]
    InsufficientClearance { at: Vec<f64>, radius: f64 },

    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {error_estimate:e})")]
    QuadratureNonConvergence {
        subdivisions: usize,
        error_estimate: f64,
    },

    #[error("operation requires a field defined on all of R^n")]
    FullSpaceRequired,

    #[error("boundary condition not certified on the sphere of radius {radius}: min <X(x),x> = {min_radial}")]
    CertificateFailed { radius: f64, min_radial: f64 },

    #[error("no certified radius up to {max_radius}{}", format_warnings(.warnings))]
    NoCertifiedRadius {
        max_radius: f64,
        warnings: Vec<String>,
    },
}

fn format_warnings(warnings: &[String]) -> String {
    if warnings.is_empty() {
        String::new()
    } else {
        format!(" ({})", warnings.join("; "))
    }
}
