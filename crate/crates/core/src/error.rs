use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// The argument lies outside the domain of the function (branch cut, zero modulus, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters violate an ordering or positivity constraint.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A pole of a meromorphic function was hit.
    #[error("pole at {0}")]
    Pole(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A series or integral is evaluated outside its region of convergence.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// Panel doubling did not reach the requested tolerance.
    #[error("quadrature tolerance not met: last difference {diff:e} after {panels} panels")]
    Quadrature { diff: f64, panels: usize },

    /// An iterative solver ran out of iterations.
    #[error("no convergence after {iterations} iterations: {what}")]
    NoConvergence { what: String, iterations: usize },

    /// A documented precondition does not hold, so the result would not be meaningful.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Curve tracing could not bracket the level set at the given abscissa.
    #[error("bracket failure at x = {x}: {reason}")]
    Bracket { x: f64, reason: String },

    /// The traced curve leaves the admissible window.
    #[error("curve exits window at x = {x}")]
    CurveExitsWindow { x: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),
}

pub type Result<T> = std::result::Result<T, Error>;
