use thiserror::Error;

/// Errors raised by path validation, integration, gauge maps, moduli
/// computations and the file readers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {index} at ({x}, {y}) lies within the origin exclusion radius")]
    VertexAtOrigin { index: usize, x: f64, y: f64 },

    #[error("segment {index} passes within {distance:e} of the origin")]
    SegmentThroughOrigin { index: usize, distance: f64 },

    #[error("degenerate path: {0}")]
    DegeneratePath(String),

    #[error("path is not closed: first vertex {first:?} differs from last vertex {last:?}")]
    NotClosed { first: (f64, f64), last: (f64, f64) },

    #[error("angular sum {raw} is {deviation:e} away from the nearest multiple of 2π")]
    WindingNotInteger { raw: f64, deviation: f64 },

    #[error("quadrature did not converge on segment {segment} after {doublings} doublings")]
    QuadratureNoConvergence { segment: usize, doublings: u32 },

    #[error("supplied gradient disagrees with finite differences at ({x}, {y}): relative error {relative_error:e}")]
    GradientInconsistent { x: f64, y: f64, relative_error: f64 },

    #[error("phase steps still exceed the threshold with {samples} samples")]
    SamplingUnresolved { samples: usize },

    #[error("map value at angle {angle} is zero or not finite")]
    InvalidMapValue { angle: f64 },

    #[error("loop has winding number {winding}, a generator needs ±1")]
    NotGenerator { winding: i64 },

    #[error("fine structure constant must be positive and finite, got {0}")]
    NonPositiveAlpha(f64),

    #[error("malformed ratio {0:?}")]
    MalformedRatio(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Short machine-readable name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::VertexAtOrigin { .. } => "VertexAtOrigin",
            Error::SegmentThroughOrigin { .. } => "SegmentThroughOrigin",
            Error::DegeneratePath(_) => "DegeneratePath",
            Error::NotClosed { .. } => "NotClosed",
            Error::WindingNotInteger { .. } => "WindingNotInteger",
            Error::QuadratureNoConvergence { .. } => "QuadratureNoConvergence",
            Error::GradientInconsistent { .. } => "GradientInconsistent",
            Error::SamplingUnresolved { .. } => "SamplingUnresolved",
            Error::InvalidMapValue { .. } => "InvalidMapValue",
            Error::NotGenerator { .. } => "NotGenerator",
            Error::NonPositiveAlpha(_) => "NonPositiveAlpha",
            Error::MalformedRatio(_) => "MalformedRatio",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse(_) => "ParseError",
            Error::Io { .. } => "IoError",
        }
    }

    /// True for failures of a numerical procedure, as opposed to invalid
    /// input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::WindingNotInteger { .. }
                | Error::QuadratureNoConvergence { .. }
                | Error::SamplingUnresolved { .. }
                | Error::InvalidMapValue { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
