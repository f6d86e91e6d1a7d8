//! Euclidean convex bodies.
//!
//! A [`ConvexBody`] is an open convex domain in `R^d` given as a halfspace
//! polytope, an ellipsoid, or a support-function oracle. The queries here are
//! the ones the Funk metric needs: interior membership, where a ray leaves the
//! body, the supporting hyperplanes at a boundary point, and the support and
//! radial functions.
//!
//! Conventions:
//! - A [`Hyperplane`] stores an outward unit normal `n` and offset `c`; the body
//!   side is the open halfspace `n·p < c`.
//! - `scale` of a body is the largest coordinate magnitude of its stored data.
//!   Interior membership uses the margin [`INTERIOR_MARGIN`] (relative), and a
//!   hyperplane counts as active at a boundary point within `ACTIVE_TOL * scale`.

mod body;
mod sphere;

pub use body::{BodyShape, ConvexBody, Ellipsoid, SupportOracle};

use nalgebra::DVector;

use crate::{Error, Result};

pub type Point = DVector<f64>;

/// Relative margin for interior membership.
pub const INTERIOR_MARGIN: f64 = 1e-9;
/// Relative tolerance for deciding that a hyperplane is active at a boundary point.
pub const ACTIVE_TOL: f64 = 1e-9;
/// Relative bisection tolerance for oracle ray exits.
pub const ORACLE_BISECTION_TOL: f64 = 1e-12;

const UNIT_TOL: f64 = 1e-12;

/// The hyperplane `{p : normal·p = offset}` with the open halfspace `normal·p < offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    normal: Point,
    offset: f64,
}

impl Hyperplane {
    /// Requires `|normal| = 1` within `1e-12`.
    pub fn new(normal: Point, offset: f64) -> Result<Self> {
        if !offset.is_finite() || normal.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBody("non-finite hyperplane data".into()));
        }
        if (normal.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidBody(format!(
                "hyperplane normal has length {}, expected 1",
                normal.norm()
            )));
        }
        Ok(Self { normal, offset })
    }

    /// Rescales `(normal, offset)` so the normal has unit length.
    pub fn normalized(normal: Point, offset: f64) -> Result<Self> {
        let len = normal.norm();
        if !(len > 0.0) || !len.is_finite() || !offset.is_finite() {
            return Err(Error::InvalidBody("degenerate hyperplane normal".into()));
        }
        Ok(Self { normal: normal / len, offset: offset / len })
    }

    pub fn from_slice(normal: &[f64], offset: f64) -> Result<Self> {
        Self::new(Point::from_column_slice(normal), offset)
    }

    pub fn normal(&self) -> &Point {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// `offset - normal·x`: positive on the body side.
    pub fn slack(&self, x: &Point) -> f64 {
        self.offset - self.normal.dot(x)
    }
}

/// Where a ray from an interior point leaves the body.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryHit {
    pub point: Point,
    pub t_exit: f64,
    /// Supporting hyperplanes active at `point`.
    pub active: Vec<Hyperplane>,
    /// Facet indices of `active` when the body is a polytope.
    pub facets: Vec<usize>,
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Distance from `x` to the hyperplane, for `x` strictly on the body side.
pub fn distance_to_hyperplane(x: &Point, plane: &Hyperplane) -> Result<f64> {
    check_dim(plane.dim(), x.len())?;
    let d = plane.slack(x);
    if d > 0.0 {
        Ok(d)
    } else {
        Err(Error::PointOutsideHalfspace)
    }
}

/// Nearest-point projection of `x` onto the hyperplane.
pub fn foot(x: &Point, plane: &Hyperplane) -> Result<Point> {
    check_dim(plane.dim(), x.len())?;
    Ok(x + plane.normal() * plane.slack(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    #[test]
    fn hyperplane_distances() {
        let pi = Hyperplane::from_slice(&[1.0, 0.0], 1.0).unwrap();
        assert_eq!(distance_to_hyperplane(&dvector![0.0, 0.0], &pi).unwrap(), 1.0);
        assert_eq!(distance_to_hyperplane(&dvector![0.5, 0.0], &pi).unwrap(), 0.5);
        let pi = Hyperplane::from_slice(&[0.6, 0.8], 2.0).unwrap();
        assert!((distance_to_hyperplane(&dvector![0.3, 0.4], &pi).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn distance_outside_halfspace_errors() {
        let pi = Hyperplane::from_slice(&[1.0, 0.0], 1.0).unwrap();
        assert_eq!(distance_to_hyperplane(&dvector![1.0, 0.0], &pi), Err(Error::PointOutsideHalfspace));
        assert_eq!(distance_to_hyperplane(&dvector![2.0, 5.0], &pi), Err(Error::PointOutsideHalfspace));
    }

    #[test]
    fn foot_examples() {
        let pi = Hyperplane::from_slice(&[1.0, 0.0], 1.0).unwrap();
        assert_eq!(foot(&dvector![0.0, 0.0], &pi).unwrap(), dvector![1.0, 0.0]);
        assert_eq!(foot(&dvector![1.0, 0.7], &pi).unwrap(), dvector![1.0, 0.7]);
        let pi = Hyperplane::from_slice(&[0.6, 0.8], 2.0).unwrap();
        let f = foot(&dvector![0.3, 0.4], &pi).unwrap();
        assert!((f - dvector![1.2, 1.6]).norm() < 1e-15);
        assert!(foot(&dvector![0.3, 0.4, 0.0], &pi).is_err());
    }

    #[test]
    fn non_unit_normal_rejected() {
        assert!(Hyperplane::from_slice(&[1.0, 1.0], 1.0).is_err());
        let h = Hyperplane::normalized(dvector![3.0, 4.0], 10.0).unwrap();
        assert_eq!(h.offset(), 2.0);
        assert!((h.normal().norm() - 1.0).abs() < 1e-15);
    }
}
