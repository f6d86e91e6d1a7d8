use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not inside the open halfspace of the hyperplane")]
    PointOutsideHalfspace,
    #[error("point is not in the interior of the body")]
    PointNotInterior,
    #[error("point is not on the boundary of the body")]
    PointNotOnBoundary,
    #[error("support function is unbounded in this direction")]
    Unbounded,
    #[error("both rays must exit the body")]
    FiniteHitsRequired,
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("invalid hyperboloid point")]
    InvalidHPoint,
    #[error("invalid tangent vector")]
    InvalidTangent,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("point lies on the geodesic")]
    PointOnGeodesic,
}
