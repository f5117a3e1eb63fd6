use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({x}, {y}, {z}) is outside the chart: 1 + m(x^2 + y^2) = {factor} <= 0")]
    Domain { x: f64, y: f64, z: f64, factor: f64 },

    #[error("frame index {0} is outside 1..=3")]
    Index(usize),

    #[error("vectors are attached to different base points")]
    BasePointMismatch,

    #[error("degenerate plane: |X|^2 |Y|^2 - <X,Y>^2 = {0:e}")]
    DegeneratePlane(f64),

    #[error("operation is only defined on the Heisenberg group (m, l) = (0, 1), got ({m}, {l})")]
    UnsupportedManifold { m: f64, l: f64 },

    #[error("row {row} (s = {s}): speed {speed} deviates from 1 by more than {tol:e}")]
    NonUnitSpeed { row: usize, s: f64, speed: f64, tol: f64 },

    #[error("row {row}: {reason}")]
    NonMonotone { row: usize, reason: String },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("Frenet frame undefined at s = {s}: geodesic curvature {k:e} is below the floor")]
    GeodesicFrameUndefined { s: f64, k: f64 },

    #[error("inadmissible alpha0 = {alpha0}: requires 5 cos^2(alpha0) - 4 >= 0 and sin(alpha0) != 0 ({reason})")]
    InadmissibleAlpha { alpha0: f64, reason: String },

    #[error("integration failed at s = {s}: {reason}")]
    IntegrationFailure { s: f64, reason: String },

    #[error("trajectory left the chart 1 + m(x^2 + y^2) > 0 at s = {s}")]
    DomainExit { s: f64 },

    #[error("expected a unit vector, got norm {0}")]
    NonUnitVector(f64),

    #[error("angle profile must have positive derivative, got {rate} at s = {s}")]
    NonMonotoneAlpha { s: f64, rate: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}
