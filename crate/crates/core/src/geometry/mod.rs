//! Closed-form spherical geometry: points, geodesics, stereographic charts,
//! the tangent field on odd spheres, and piecewise paths built from them.

mod path;
mod point;

use thiserror::Error;

pub use path::{max_deviation, PiecewisePath, Segment, JOIN_TOL};
pub use point::{
    max_abs_diff, slerp, slerp_with, stereo_project, stereo_unproject, vector_field, Sign,
    UnitPoint, DEFAULT_ANTIPODAL_EPS, POLE_TOL, RENORMALIZE_TOL, UNIT_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point norm {norm} is not within 1e-6 of 1")]
    NotUnit { norm: f64 },
    #[error("a point on S^m with m >= 1 needs at least 2 coordinates, got {0}")]
    TooFewCoordinates(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("dimension mismatch: S^{left} vs S^{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("slerp between antipodal points (<x,y> = {dot}); use the great-arc rule")]
    AntipodalInput { dot: f64 },
    #[error("point coincides with the projection pole")]
    AtPole,
    #[error("S^{0} has even dimension and carries no non-vanishing vector field")]
    EvenDimension(usize),
    #[error("parameter {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("discontinuous join at junction {index} (gap {gap:e})")]
    DiscontinuousJoin { index: usize, gap: f64 },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
}
