//! The hyperbolic plane in the hyperboloid model.
//!
//! Coordinates are ordered `(p1, p2, p0)` with the Minkowski form
//! `⟨u, v⟩ = u1 v1 + u2 v2 - u0 v0`. Points satisfy `⟨p, p⟩ = -1`, `p0 > 0`.
//! A complete geodesic is the zero set of `⟨·, n⟩` for a spacelike unit
//! normal `n`; its inside is `⟨p, n⟩ < 0`.
//!
//! Poincaré disk coordinates convert as
//! `(u1, u2) ↦ (2u1, 2u2, 1 + |u|²) / (1 - |u|²)` and back by
//! `u = (p1, p2) / (1 + p0)`.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use crate::{Error, Result};

/// Margin on `⟨p, n⟩` for interior membership.
pub const INTERIOR_EPS: f64 = 1e-9;
const POINT_TOL: f64 = 1e-10;
const TANGENT_TOL: f64 = 1e-10;
const UNIT_TOL: f64 = 1e-9;
/// Below `-⟨p, q⟩ = 1 + SMALL_DIST`, distances use the chordal form.
const SMALL_DIST: f64 = 1e-8;
/// `|⟨p, n⟩|` at or below this counts as lying on the geodesic.
const ON_LINE_TOL: f64 = 1e-12;

pub fn minkowski(u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    u.x * v.x + u.y * v.y - u.z * v.z
}

/// Rescales a future timelike vector onto the hyperboloid.
fn to_hyperboloid(v: Vector3<f64>) -> Result<HPoint> {
    // Far out, ⟨v, v⟩ cancels catastrophically; lift the chart coordinates instead.
    if v.z > 1e3 && v.x.is_finite() && v.y.is_finite() {
        return Ok(HPoint::from_xy(v.x, v.y));
    }
    let q = -minkowski(&v, &v);
    if !(q > 0.0) || !(v.z > 0.0) || !q.is_finite() {
        return Err(Error::InvalidHPoint);
    }
    Ok(HPoint { coords: v / q.sqrt() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    coords: Vector3<f64>,
}

impl HPoint {
    /// Checks `⟨p, p⟩ = -1` (relative to `p0²`) and `p0 > 0`.
    pub fn new(coords: Vector3<f64>) -> Result<Self> {
        let q = minkowski(&coords, &coords);
        if !(coords.z > 0.0) || !((q + 1.0).abs() <= POINT_TOL * coords.z.powi(2).max(1.0)) {
            return Err(Error::InvalidHPoint);
        }
        Ok(Self { coords })
    }

    pub fn origin() -> Self {
        Self { coords: Vector3::new(0.0, 0.0, 1.0) }
    }

    /// The point over chart coordinates `(p1, p2)`.
    pub fn from_xy(x: f64, y: f64) -> Self {
        Self { coords: Vector3::new(x, y, (1.0 + x * x + y * y).sqrt()) }
    }

    pub fn from_disk(u1: f64, u2: f64) -> Result<Self> {
        let r2 = u1 * u1 + u2 * u2;
        if !(r2 < 1.0) {
            return Err(Error::InvalidHPoint);
        }
        let s = 1.0 - r2;
        Ok(Self { coords: Vector3::new(2.0 * u1 / s, 2.0 * u2 / s, (1.0 + r2) / s) })
    }

    pub fn to_disk(&self) -> [f64; 2] {
        let d = 1.0 + self.coords.z;
        [self.coords.x / d, self.coords.y / d]
    }

    pub fn coords(&self) -> &Vector3<f64> {
        &self.coords
    }

    pub fn xy(&self) -> [f64; 2] {
        [self.coords.x, self.coords.y]
    }
}

/// A tangent vector `vec` at `base`, `⟨base, vec⟩ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HTangent {
    base: HPoint,
    vec: Vector3<f64>,
}

impl HTangent {
    pub fn new(base: HPoint, vec: Vector3<f64>) -> Result<Self> {
        let scale = base.coords.norm() * vec.norm();
        if !(minkowski(&base.coords, &vec).abs() <= TANGENT_TOL * scale.max(1.0)) {
            return Err(Error::InvalidTangent);
        }
        Ok(Self { base, vec })
    }

    /// Projects `v` onto the tangent plane at `base`.
    pub fn projected(base: HPoint, v: Vector3<f64>) -> Self {
        let vec = v + base.coords * minkowski(&base.coords, &v);
        Self { base, vec }
    }

    /// The unit tangent at the origin in direction `angle` from the `p1` axis.
    pub fn at_origin(angle: f64) -> Self {
        Self { base: HPoint::origin(), vec: Vector3::new(angle.cos(), angle.sin(), 0.0) }
    }

    pub fn base(&self) -> &HPoint {
        &self.base
    }

    pub fn vec(&self) -> &Vector3<f64> {
        &self.vec
    }

    pub fn norm(&self) -> f64 {
        minkowski(&self.vec, &self.vec).max(0.0).sqrt()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { base: self.base, vec: self.vec * k }
    }

    /// Rescaled to unit length; fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidTangent);
        }
        Ok(self.scaled(1.0 / n))
    }

    pub fn dot(&self, other: &HTangent) -> f64 {
        minkowski(&self.vec, &other.vec)
    }
}

/// The complete geodesic `{p : ⟨p, n⟩ = 0}`; its inside is `⟨p, n⟩ < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HGeodesicLine {
    normal: Vector3<f64>,
}

/// How a geodesic looks in the Poincaré disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiskCurve {
    Circle { center: [f64; 2], radius: f64 },
    Diameter { direction: [f64; 2] },
}

impl HGeodesicLine {
    /// Requires `⟨n, n⟩ = 1` within `1e-10`.
    pub fn new(normal: Vector3<f64>) -> Result<Self> {
        if !((minkowski(&normal, &normal) - 1.0).abs() <= 1e-10) {
            return Err(Error::InvalidBody("geodesic normal must be spacelike with unit length".into()));
        }
        Ok(Self { normal })
    }

    /// Rescales a spacelike vector to unit length.
    pub fn from_normal(normal: Vector3<f64>) -> Result<Self> {
        let q = minkowski(&normal, &normal);
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::InvalidBody("geodesic normal must be spacelike".into()));
        }
        Ok(Self { normal: normal / q.sqrt() })
    }

    /// The geodesic between two ideal points on the unit circle, with the
    /// inside on the right when walking from `a` to `b`.
    pub fn from_ideal_endpoints(a: [f64; 2], b: [f64; 2]) -> Result<Self> {
        let on_circle = |e: [f64; 2]| ((e[0] * e[0] + e[1] * e[1]).sqrt() - 1.0).abs() <= 1e-9;
        if !on_circle(a) || !on_circle(b) {
            return Err(Error::InvalidBody("ideal endpoints must lie on the unit circle".into()));
        }
        let ta = a[1].atan2(a[0]);
        let tb = b[1].atan2(b[0]);
        let sweep = (tb - ta).rem_euclid(std::f64::consts::TAU);
        if !(1e-9..=std::f64::consts::TAU - 1e-9).contains(&sweep) {
            return Err(Error::InvalidBody("ideal endpoints coincide".into()));
        }
        let na = Vector3::new(a[0], a[1], 1.0);
        let nb = Vector3::new(b[0], b[1], 1.0);
        let c = na.cross(&nb);
        let line = Self::from_normal(Vector3::new(c.x, c.y, -c.z))?;
        // The boundary arc swept counterclockwise from a to b lies inside.
        let mid = ta + 0.5 * sweep;
        let probe = Vector3::new(mid.cos(), mid.sin(), 1.0);
        Ok(if minkowski(&probe, &line.normal) > 0.0 { line.flipped() } else { line })
    }

    pub fn normal(&self) -> &Vector3<f64> {
        &self.normal
    }

    pub fn flipped(&self) -> Self {
        Self { normal: -self.normal }
    }

    /// Ideal endpoints `(a, b)` ordered so the inside is on the right from `a` to `b`.
    pub fn ideal_endpoints(&self) -> ([f64; 2], [f64; 2]) {
        let n = &self.normal;
        let m = (n.x * n.x + n.y * n.y).sqrt();
        let (ux, uy) = (n.x / m, n.y / m);
        let c = n.z / m;
        let s = (1.0 - c * c).max(0.0).sqrt();
        let p = [ux * c - uy * s, uy * c + ux * s];
        let q = [ux * c + uy * s, uy * c - ux * s];
        match Self::from_ideal_endpoints(p, q) {
            Ok(l) if l.normal.dot(&self.normal) > 0.0 => (p, q),
            _ => (q, p),
        }
    }

    pub fn disk_curve(&self) -> DiskCurve {
        let n = &self.normal;
        if n.z.abs() < 1e-12 {
            let m = (n.x * n.x + n.y * n.y).sqrt();
            DiskCurve::Diameter { direction: [-n.y / m, n.x / m] }
        } else {
            DiskCurve::Circle { center: [n.x / n.z, n.y / n.z], radius: 1.0 / n.z.abs() }
        }
    }

    /// Reflection of `p` across the line.
    pub fn reflect(&self, p: &HPoint) -> HPoint {
        let a = minkowski(&p.coords, &self.normal);
        HPoint { coords: p.coords - self.normal * (2.0 * a) }
    }
}

/// Intersection of the insides of finitely many geodesics.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicDomain {
    boundaries: Vec<HGeodesicLine>,
    witness: HPoint,
}

impl GeodesicDomain {
    pub fn new(boundaries: Vec<HGeodesicLine>, witness: HPoint) -> Result<Self> {
        if boundaries.is_empty() {
            return Err(Error::InvalidBody("domain needs at least one boundary geodesic".into()));
        }
        let domain = Self { boundaries, witness };
        if !domain_contains(&domain, &witness) {
            return Err(Error::InvalidBody("witness is not inside every boundary".into()));
        }
        Ok(domain)
    }

    pub fn boundaries(&self) -> &[HGeodesicLine] {
        &self.boundaries
    }

    pub fn witness(&self) -> &HPoint {
        &self.witness
    }

    pub fn transformed(&self, g: &Isometry) -> Self {
        Self {
            boundaries: self.boundaries.iter().map(|b| g.apply_line(b)).collect(),
            witness: g.apply(&self.witness),
        }
    }
}

/// Geodesic distance `acosh(-⟨p, q⟩)`.
pub fn h_dist(p: &HPoint, q: &HPoint) -> f64 {
    let c = -minkowski(&p.coords, &q.coords);
    if c < 1.0 + SMALL_DIST {
        // ⟨p - q, p - q⟩ = 4 sinh²(d / 2)
        let diff = p.coords - q.coords;
        2.0 * (0.5 * minkowski(&diff, &diff).max(0.0).sqrt()).asinh()
    } else {
        c.acosh()
    }
}

fn check_unit(t: &HTangent) -> Result<()> {
    if (minkowski(&t.vec, &t.vec) - 1.0).abs() <= UNIT_TOL {
        Ok(())
    } else {
        Err(Error::InvalidTangent)
    }
}

/// `base cosh s + vec sinh s` for a unit tangent.
pub fn exp_map(t: &HTangent, s: f64) -> Result<HPoint> {
    check_unit(t)?;
    to_hyperboloid(t.base.coords * s.cosh() + t.vec * s.sinh())
}

/// The point and unit velocity at parameter `s` along the geodesic of a unit tangent.
pub fn geodesic_at(t: &HTangent, s: f64) -> Result<HTangent> {
    let p = exp_map(t, s)?;
    let v = t.base.coords * s.sinh() + t.vec * s.cosh();
    Ok(HTangent::projected(p, v))
}

/// Unit tangent at `p` toward `q`, and their distance.
pub fn log_map(p: &HPoint, q: &HPoint) -> Result<(HTangent, f64)> {
    let d = h_dist(p, q);
    let w = q.coords + p.coords * minkowski(&p.coords, &q.coords);
    let len = minkowski(&w, &w);
    if !(d > 0.0) || !(len > 0.0) {
        return Err(Error::CoincidentPoints);
    }
    Ok((HTangent { base: *p, vec: w / len.sqrt() }, d))
}

/// `asinh⟨p, n⟩`: negative on the inside, magnitude the distance to the line.
pub fn signed_dist_to_geodesic(p: &HPoint, line: &HGeodesicLine) -> f64 {
    minkowski(&p.coords, &line.normal).asinh()
}

/// Nearest point of the line.
pub fn project_to_geodesic(p: &HPoint, line: &HGeodesicLine) -> HPoint {
    let a = minkowski(&p.coords, &line.normal);
    HPoint { coords: (p.coords - line.normal * a) / (1.0 + a * a).sqrt() }
}

/// Unit tangent at `p` pointing to its projection on the line.
pub fn normal_field(p: &HPoint, line: &HGeodesicLine) -> Result<HTangent> {
    let a = minkowski(&p.coords, &line.normal);
    if a.abs() <= ON_LINE_TOL {
        return Err(Error::PointOnGeodesic);
    }
    let v = (line.normal + p.coords * a) * (-a.signum() / (1.0 + a * a).sqrt());
    Ok(HTangent { base: *p, vec: v })
}

/// Where the geodesic ray from `x` along unit `xi` meets the line, if it does.
pub fn ray_hit_geodesic(xi: &HTangent, line: &HGeodesicLine) -> Result<Option<(HPoint, f64)>> {
    check_unit(xi)?;
    let a = minkowski(&xi.base.coords, &line.normal);
    if a.abs() <= ON_LINE_TOL {
        return Err(Error::PointOnGeodesic);
    }
    Ok(ray_hit_param(a, minkowski(&xi.vec, &line.normal)).map(|s| {
        let p = exp_map(xi, s).expect("unit tangent");
        (p, s)
    }))
}

/// Positive root of `a cosh s + b sinh s = 0`.
pub(crate) fn ray_hit_param(a: f64, b: f64) -> Option<f64> {
    if b == 0.0 {
        return None;
    }
    let r = -a / b;
    (r > 0.0 && r < 1.0).then(|| r.atanh())
}

/// `⟨p, n⟩ < -ε` for every boundary.
pub fn domain_contains(domain: &GeodesicDomain, p: &HPoint) -> bool {
    domain.boundaries.iter().all(|b| minkowski(&p.coords, &b.normal) < -INTERIOR_EPS)
}

/// A Lorentz transformation preserving the hyperboloid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    m: Matrix3<f64>,
}

impl Isometry {
    pub fn identity() -> Self {
        Self { m: Matrix3::identity() }
    }

    /// Rotation about the origin.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { m: Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0) }
    }

    /// Translation by `t` along the `p1` axis; moves the origin to `(sinh t, 0, cosh t)`.
    pub fn boost(t: f64) -> Self {
        let (s, c) = (t.sinh(), t.cosh());
        Self { m: Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, c) }
    }

    pub fn compose(&self, other: &Isometry) -> Self {
        Self { m: self.m * other.m }
    }

    /// Rotation, boost by up to `max_boost`, rotation.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_boost: f64) -> Self {
        let tau = std::f64::consts::TAU;
        Self::rotation(rng.random::<f64>() * tau)
            .compose(&Self::boost(rng.random_range(-max_boost..=max_boost)))
            .compose(&Self::rotation(rng.random::<f64>() * tau))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn apply(&self, p: &HPoint) -> HPoint {
        to_hyperboloid(self.m * p.coords).expect("Lorentz image of a point")
    }

    pub fn apply_tangent(&self, t: &HTangent) -> HTangent {
        HTangent::projected(self.apply(&t.base), self.m * t.vec)
    }

    pub fn apply_line(&self, l: &HGeodesicLine) -> HGeodesicLine {
        HGeodesicLine::from_normal(self.m * l.normal).expect("Lorentz image of a normal")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn on_axis(s: f64) -> HPoint {
        HPoint::new(Vector3::new(s.sinh(), 0.0, s.cosh())).unwrap()
    }

    fn line(n: [f64; 3]) -> HGeodesicLine {
        HGeodesicLine::new(Vector3::new(n[0], n[1], n[2])).unwrap()
    }

    #[test]
    fn point_validation() {
        assert!(HPoint::new(Vector3::new(0.0, 0.0, 1.0)).is_ok());
        assert_eq!(HPoint::new(Vector3::new(0.0, 0.0, -1.0)), Err(Error::InvalidHPoint));
        assert_eq!(HPoint::new(Vector3::new(1.0, 0.0, 1.0)), Err(Error::InvalidHPoint));
        assert!(HPoint::from_disk(1.0, 0.0).is_err());
    }

    #[test]
    fn disk_round_trip() {
        let p = HPoint::from_disk(0.3, -0.6).unwrap();
        let q = HPoint::new(*p.coords()).unwrap();
        let [u1, u2] = q.to_disk();
        assert!((u1 - 0.3).abs() < 1e-15 && (u2 + 0.6).abs() < 1e-15);
        // Distance from the origin is 2 artanh |u|.
        let r = (0.3f64 * 0.3 + 0.6 * 0.6).sqrt();
        assert!((h_dist(&HPoint::origin(), &p) - 2.0 * r.atanh()).abs() < 1e-14);
    }

    #[test]
    fn distance_examples() {
        let o = HPoint::origin();
        assert_eq!(h_dist(&o, &o), 0.0);
        assert!((h_dist(&o, &on_axis(1.0)) - 1.0).abs() < 1e-14);
        assert!((h_dist(&o, &on_axis(2.0)) - 2.0).abs() < 1e-14);
        let d = h_dist(&on_axis(3.0), &on_axis(3.0 + 1e-9));
        assert!((d - 1e-9).abs() < 1e-13, "{d:e}");
    }

    #[test]
    fn exp_examples() {
        let t = HTangent::at_origin(0.0);
        assert_eq!(exp_map(&t, 0.0).unwrap(), HPoint::origin());
        let p = exp_map(&t, 1.0).unwrap();
        assert!((p.coords() - Vector3::new(1f64.sinh(), 0.0, 1f64.cosh())).norm() < 1e-15);
        let (back, s) = log_map(&HPoint::origin(), &p).unwrap();
        assert!((s - 1.0).abs() < 1e-15);
        assert!((back.vec() - t.vec()).norm() < 1e-15);
        let bad = HTangent::new(HPoint::origin(), Vector3::new(2.0, 0.0, 0.0)).unwrap();
        assert_eq!(exp_map(&bad, 1.0), Err(Error::InvalidTangent));
    }

    #[test]
    fn log_examples() {
        let o = HPoint::origin();
        let q = exp_map(&HTangent::at_origin(std::f64::consts::FRAC_PI_2), 0.7).unwrap();
        let (t, s) = log_map(&o, &q).unwrap();
        assert!((s - 0.7).abs() < 1e-14);
        assert!((t.vec() - Vector3::new(0.0, 1.0, 0.0)).norm() < 1e-14);
        let (_, back) = log_map(&q, &o).unwrap();
        assert_eq!(back, s);
        assert_eq!(log_map(&o, &o), Err(Error::CoincidentPoints));
    }

    #[test]
    fn exp_log_round_trip_away_from_origin() {
        let p = HPoint::from_disk(0.7, 0.2).unwrap();
        let q = HPoint::from_disk(-0.4, 0.5).unwrap();
        let (t, s) = log_map(&p, &q).unwrap();
        let r = exp_map(&t, s).unwrap();
        assert!(h_dist(&r, &q) < 1e-9);
    }

    #[test]
    fn signed_distance_examples() {
        let p = on_axis(1.0);
        assert!((signed_dist_to_geodesic(&p, &line([1.0, 0.0, 0.0])) - 1.0).abs() < 1e-15);
        assert!((signed_dist_to_geodesic(&p, &line([-1.0, 0.0, 0.0])) + 1.0).abs() < 1e-15);
        assert_eq!(signed_dist_to_geodesic(&HPoint::origin(), &line([1.0, 0.0, 0.0])), 0.0);
    }

    #[test]
    fn projection_examples() {
        let sigma = line([1.0, 0.0, 0.0]);
        let foot = project_to_geodesic(&on_axis(1.0), &sigma);
        assert!((foot.coords() - HPoint::origin().coords()).norm() < 1e-15);
        let on = HPoint::from_xy(0.0, 0.8);
        assert_eq!(project_to_geodesic(&on, &sigma), on);
    }

    #[test]
    fn projection_is_perpendicular_and_nearest() {
        let sigma = HGeodesicLine::from_ideal_endpoints([0.6, 0.8], [-1.0, 0.0]).unwrap();
        let p = HPoint::from_disk(0.2, -0.3).unwrap();
        let foot = project_to_geodesic(&p, &sigma);
        assert!(minkowski(foot.coords(), sigma.normal()).abs() < 1e-12);
        let d = h_dist(&p, &foot);
        assert!((d - signed_dist_to_geodesic(&p, &sigma).abs()).abs() < 1e-12);
        // The geodesic p → foot meets σ at a right angle.
        let (to_p, _) = log_map(&foot, &p).unwrap();
        let c = sigma.normal().cross(foot.coords());
        let along = HTangent::projected(foot, Vector3::new(c.x, c.y, -c.z));
        assert!(to_p.dot(&along).abs() < 1e-9 * along.norm());
        for i in 0..100 {
            let s = -5.0 + 0.1 * i as f64;
            let dir = along.normalized().unwrap();
            let q = exp_map(&dir, s).unwrap();
            assert!(h_dist(&p, &q) >= d - 1e-12);
        }
    }

    #[test]
    fn normal_field_examples() {
        let sigma = line([1.0, 0.0, 0.0]);
        let p = on_axis(1.0);
        let nu = normal_field(&p, &sigma).unwrap();
        let expected = Vector3::new(-(1f64.cosh()), 0.0, -(1f64.sinh()));
        assert!((nu.vec() - expected).norm() < 1e-14);
        assert!((nu.dot(&nu) - 1.0).abs() < 1e-14);
        let q = exp_map(&nu, 0.25).unwrap();
        assert!((signed_dist_to_geodesic(&q, &sigma) - 0.75).abs() < 1e-14);
        assert_eq!(normal_field(&HPoint::origin(), &sigma), Err(Error::PointOnGeodesic));
    }

    #[test]
    fn normal_field_is_negative_gradient() {
        let sigma = HGeodesicLine::from_ideal_endpoints([1.0, 0.0], [0.0, 1.0]).unwrap();
        let p = HPoint::from_disk(-0.3, -0.1).unwrap();
        let nu = normal_field(&p, &sigma).unwrap();
        let h = 1e-5;
        let f = |s: f64| signed_dist_to_geodesic(&exp_map(&nu, s).unwrap(), &sigma).abs();
        let deriv = (f(h) - f(-h)) / (2.0 * h);
        assert!((deriv + 1.0).abs() < 1e-6);
    }

    #[test]
    fn ray_hit_examples() {
        let sigma = line([1.0, 0.0, 0.0]);
        let x = on_axis(2.0);
        let toward = normal_field(&x, &sigma).unwrap();
        let (hit, s) = ray_hit_geodesic(&toward, &sigma).unwrap().unwrap();
        assert!((s - 2.0).abs() < 1e-12);
        assert!(h_dist(&hit, &HPoint::origin()) < 1e-12);
        assert_eq!(ray_hit_geodesic(&toward.scaled(-1.0), &sigma).unwrap(), None);
        // Nearly parallel: |⟨x,n⟩ / ⟨ξ,n⟩| ≥ 1.
        let parallel = HTangent::projected(x, Vector3::new(0.0, 1.0, 0.0)).normalized().unwrap();
        assert_eq!(ray_hit_geodesic(&parallel, &sigma).unwrap(), None);
    }

    #[test]
    fn ray_hit_at_an_angle() {
        let sigma = line([1.0, 0.0, 0.0]);
        let x = on_axis(1.0);
        let xi = HTangent::projected(x, Vector3::new(-1.0, 0.2, -(1f64.tanh()))).normalized().unwrap();
        let (hit, s) = ray_hit_geodesic(&xi, &sigma).unwrap().unwrap();
        let a = minkowski(x.coords(), sigma.normal());
        let b = minkowski(xi.vec(), sigma.normal());
        assert!((s.tanh() + a / b).abs() < 1e-14);
        assert!(minkowski(hit.coords(), sigma.normal()).abs() < 1e-12);
    }

    #[test]
    fn endpoints_orientation() {
        // Walking from (1,0) to (-1,0) the upper half disk is on the right.
        let l = HGeodesicLine::from_ideal_endpoints([1.0, 0.0], [-1.0, 0.0]).unwrap();
        let up = HPoint::from_disk(0.0, 0.5).unwrap();
        assert!(minkowski(up.coords(), l.normal()) < 0.0);
        let (a, b) = l.ideal_endpoints();
        assert!((a[0] - 1.0).abs() < 1e-12 && (b[0] + 1.0).abs() < 1e-12);

        let l = HGeodesicLine::from_ideal_endpoints([0.0, 1.0], [1.0, 0.0]).unwrap();
        assert!(minkowski(HPoint::origin().coords(), l.normal()) < 0.0);
        let (a, b) = l.ideal_endpoints();
        assert!((a[1] - 1.0).abs() < 1e-12 && (b[0] - 1.0).abs() < 1e-12);
        match l.disk_curve() {
            DiskCurve::Circle { center, radius } => {
                assert!((center[0] - 1.0).abs() < 1e-12 && (center[1] - 1.0).abs() < 1e-12);
                assert!((radius - 1.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn domain_membership() {
        let sigma = line([-1.0, 0.0, 0.0]);
        let w = on_axis(1.0);
        let d = GeodesicDomain::new(vec![sigma], w).unwrap();
        assert!(domain_contains(&d, &w));
        assert!(!domain_contains(&d, &HPoint::from_xy(0.0, 3.0)));
        assert!(!domain_contains(&d, &sigma.reflect(&w)));
        assert!(GeodesicDomain::new(vec![sigma], on_axis(-1.0)).is_err());
    }

    #[test]
    fn isometries_preserve_distance() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let p = HPoint::from_disk(0.1, 0.5).unwrap();
        let q = HPoint::from_disk(-0.6, 0.2).unwrap();
        let sigma = HGeodesicLine::from_ideal_endpoints([0.0, -1.0], [0.8, 0.6]).unwrap();
        for _ in 0..20 {
            let g = Isometry::random(&mut rng, 2.0);
            assert!((h_dist(&g.apply(&p), &g.apply(&q)) - h_dist(&p, &q)).abs() < 1e-9);
            let (gs, s) = (g.apply_line(&sigma), signed_dist_to_geodesic(&p, &sigma));
            assert!((signed_dist_to_geodesic(&g.apply(&p), &gs) - s).abs() < 1e-9);
        }
    }
}
