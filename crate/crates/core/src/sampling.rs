//! Random bodies, domains, points and maps for property tests.
//!
//! Every generator takes the RNG explicitly so callers can derive one
//! independent stream per trial.

use nalgebra::{DMatrix, DVector, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::euclid_convex::{ConvexBody, Hyperplane, Point};
use crate::funk_model::first_hit;
use crate::hyperbolic_core::{domain_contains, exp_map, GeodesicDomain, HGeodesicLine, HPoint, HTangent, Isometry};
use crate::{Error, Result};

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Point {
    loop {
        let v = Point::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-3 {
            return v / n;
        }
    }
}

/// Random orthonormal matrix (QR of a Gaussian matrix).
pub fn rotation<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    g.qr().q()
}

/// Bounded polytope with `facets` halfspaces (at least `dim + 1`), translated
/// by a random offset in `[-1, 1]^d`. Retries until bounded.
pub fn polytope<R: Rng + ?Sized>(rng: &mut R, dim: usize, facets: usize) -> Result<ConvexBody> {
    let facets = facets.max(dim + 1);
    let center = Point::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
    for _ in 0..200 {
        let planes = (0..facets)
            .map(|_| {
                let n = unit_vector(rng, dim);
                let c = rng.random_range(0.3..1.5) + n.dot(&center);
                Hyperplane::new(n, c)
            })
            .collect::<Result<Vec<_>>>()?;
        let body = ConvexBody::polytope(planes, center.clone())?;
        if body.is_bounded() {
            return Ok(body);
        }
    }
    Err(Error::NumericFailure("could not sample a bounded polytope".into()))
}

/// Ellipsoid with radii in `[0.3, 2]`, random axes and center in `[-1, 1]^d`.
pub fn ellipsoid<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<ConvexBody> {
    let center = Point::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
    let radii = DVector::from_fn(dim, |_, _| rng.random_range(0.3..2.0));
    ConvexBody::ellipsoid(center, rotation(rng, dim), radii)
}

/// Interior point on a random ray from the witness, at a fraction in
/// `[0, max_frac)` of the distance to the boundary.
pub fn interior_point<R: Rng + ?Sized>(rng: &mut R, body: &ConvexBody, max_frac: f64) -> Result<Point> {
    let w = body.witness().clone();
    for _ in 0..100 {
        let xi = unit_vector(rng, body.dim());
        let reach = body.radial_function(&w, &xi)?.min(1e3 * body.scale());
        let p = &w + xi * (reach * rng.random_range(0.0..max_frac));
        if body.contains_interior(&p)? {
            return Ok(p);
        }
    }
    Err(Error::NumericFailure("could not sample an interior point".into()))
}

/// Invertible matrix with singular values in `[0.3, 3]`, and a translation.
pub fn affine_map<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> (DMatrix<f64>, Point) {
    let s = DMatrix::from_diagonal(&DVector::from_fn(dim, |_, _| rng.random_range(0.3..3.0)));
    let a = rotation(rng, dim) * s * rotation(rng, dim);
    let t = Point::from_fn(dim, |_, _| rng.random_range(-2.0..2.0));
    (a, t)
}

/// Domain bounded by `n` geodesics at distance `[0.2, 2]` from a common
/// witness, moved by a random isometry.
pub fn domain<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<GeodesicDomain> {
    let lines = (0..n)
        .map(|_| {
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let r: f64 = rng.random_range(0.2..2.0);
            HGeodesicLine::new(Vector3::new(theta.cos() * r.cosh(), theta.sin() * r.cosh(), r.sinh()))
        })
        .collect::<Result<Vec<_>>>()?;
    let base = GeodesicDomain::new(lines, HPoint::origin())?;
    Ok(base.transformed(&Isometry::random(rng, 1.5)))
}

/// Point on a random geodesic ray from the witness, at a fraction in
/// `[0, max_frac)` of the way to the first boundary (rays that miss are cut at 3).
pub fn domain_point<R: Rng + ?Sized>(rng: &mut R, domain: &GeodesicDomain, max_frac: f64) -> Result<HPoint> {
    let w = *domain.witness();
    for _ in 0..100 {
        let xi = random_tangent(rng, &w);
        let reach = first_hit(domain, &xi).map_or(3.0, |(_, s)| s.min(3.0));
        let p = exp_map(&xi, reach * rng.random_range(0.0..max_frac))?;
        if domain_contains(domain, &p) {
            return Ok(p);
        }
    }
    Err(Error::NumericFailure("could not sample a domain point".into()))
}

/// Unit tangent at `p` with uniformly distributed angle.
pub fn random_tangent<R: Rng + ?Sized>(rng: &mut R, p: &HPoint) -> HTangent {
    let e1 = HTangent::projected(*p, Vector3::new(1.0, 0.0, 0.0)).normalized().expect("nonzero projection");
    // Minkowski cross product of p and e1 is orthogonal to both.
    let c = p.coords().cross(e1.vec());
    let e2 = HTangent::projected(*p, Vector3::new(c.x, c.y, -c.z)).normalized().expect("nonzero projection");
    let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    HTangent::projected(*p, e1.vec() * a.cos() + e2.vec() * a.sin())
}
