use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Evaluation requested at or next to a pole of the map (|sin z| below
    /// the pole-exclusion radius).
    #[error("pole: |sin z| = {0:e} is below the exclusion radius")]
    Pole(f64),
    /// The critical-curve quadratic has both roots on the imaginary axis;
    /// happens only for k >= 2 at the arc endpoints.
    #[error("boundary case: critical-curve root has Re s = 0 at t = {0}")]
    BoundaryCase(f64),
    /// A parameter is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    /// The query point sits on (or within 1e-9 of) the integration curve,
    /// so the winding number is undefined.
    #[error("query point lies on the curve (distance {0:e})")]
    OnCurve(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
