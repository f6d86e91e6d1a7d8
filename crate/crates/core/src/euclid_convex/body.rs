use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::{check_dim, sphere, BoundaryHit, Hyperplane, Point, ACTIVE_TOL, INTERIOR_MARGIN, ORACLE_BISECTION_TOL};
use crate::{Error, Result};

/// Ellipsoid `{center + axes · diag(radii) · z : |z| < 1}` with orthonormal `axes` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    pub center: Point,
    pub axes: DMatrix<f64>,
    pub radii: DVector<f64>,
}

impl Ellipsoid {
    /// Coordinates of `x` in the frame where the ellipsoid is the unit ball.
    fn pullback(&self, x: &Point) -> Point {
        let local = self.axes.tr_mul(&(x - &self.center));
        local.component_div(&self.radii)
    }

    fn pullback_dir(&self, v: &Point) -> Point {
        self.axes.tr_mul(v).component_div(&self.radii)
    }

    /// `|D Rᵀ u|`, the support of the centered ellipsoid.
    fn stretch(&self, u: &Point) -> Point {
        self.axes.tr_mul(u).component_mul(&self.radii)
    }

    fn gauge(&self, x: &Point) -> f64 {
        self.pullback(x).norm()
    }
}

type SupportFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;
type BoundaryFn = Arc<dyn Fn(&Point) -> Point + Send + Sync>;

/// A convex body known only through its support function `h(u) = sup_{p∈Ω} u·p`
/// (for unit `u`) and the boundary point attaining it.
#[derive(Clone)]
pub struct SupportOracle {
    dim: usize,
    support: SupportFn,
    boundary_point: BoundaryFn,
}

impl SupportOracle {
    pub fn new<H, B>(dim: usize, support: H, boundary_point: B) -> Self
    where
        H: Fn(&Point) -> f64 + Send + Sync + 'static,
        B: Fn(&Point) -> Point + Send + Sync + 'static,
    {
        Self { dim, support: Arc::new(support), boundary_point: Arc::new(boundary_point) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self, u: &Point) -> f64 {
        (self.support)(u)
    }

    pub fn boundary_point(&self, u: &Point) -> Point {
        (self.boundary_point)(u)
    }

    /// `min_u h(u) - u·p` over unit `u`, with the minimizing direction.
    /// Positive exactly when `p` is interior.
    fn gap(&self, p: &Point) -> (f64, Point) {
        sphere::minimize(|u| self.support(u) - u.dot(p), self.dim)
    }
}

impl fmt::Debug for SupportOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SupportOracle").field("dim", &self.dim).finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum BodyShape {
    HalfspacePolytope(Vec<Hyperplane>),
    Ellipsoid(Ellipsoid),
    SupportOracle(SupportOracle),
}

/// An open convex body with a certified interior point.
#[derive(Debug, Clone)]
pub struct ConvexBody {
    shape: BodyShape,
    witness: Point,
    scale: f64,
}

impl ConvexBody {
    /// Intersection of the open halfspaces; `witness` must be interior.
    pub fn polytope(halfspaces: Vec<Hyperplane>, witness: Point) -> Result<Self> {
        let dim = witness.len();
        if dim < 2 {
            return Err(Error::InvalidBody("dimension must be at least 2".into()));
        }
        if halfspaces.is_empty() {
            return Err(Error::InvalidBody("polytope needs at least one halfspace".into()));
        }
        for h in &halfspaces {
            check_dim(dim, h.dim())?;
        }
        let scale = halfspaces
            .iter()
            .flat_map(|h| h.normal().iter().map(|v| v.abs()).chain(std::iter::once(h.offset().abs())))
            .fold(0.0, f64::max);
        Self::with_witness(BodyShape::HalfspacePolytope(halfspaces), witness, scale)
    }

    /// Polytope whose witness is the centroid of its vertices. Fails for
    /// empty interiors and for polytopes without enough vertices to pin an
    /// interior point (pass a witness to [`ConvexBody::polytope`] instead).
    pub fn polytope_from_vertices(halfspaces: Vec<Hyperplane>, dim: usize) -> Result<Self> {
        for h in &halfspaces {
            check_dim(dim, h.dim())?;
        }
        let rows: Vec<(Point, f64)> = halfspaces.iter().map(|h| (h.normal().clone(), h.offset())).collect();
        let scale = rows.iter().map(|(_, c)| c.abs()).fold(1.0, f64::max);
        let mut sum = Point::zeros(dim);
        let mut count = 0usize;
        for_each_vertex(&rows, dim, 1e-9 * scale, |v| {
            sum += v;
            count += 1;
        })?;
        if count == 0 {
            return Err(Error::InvalidBody("polytope has no vertices: empty interior or a witness is needed".into()));
        }
        Self::polytope(halfspaces, sum / count as f64)
    }

    /// The axis-aligned cube `[-half, half]^d`.
    pub fn cube(dim: usize, half: f64) -> Result<Self> {
        let mut planes = Vec::with_capacity(2 * dim);
        for k in 0..dim {
            for s in [1.0, -1.0] {
                let mut n = Point::zeros(dim);
                n[k] = s;
                planes.push(Hyperplane::new(n, half)?);
            }
        }
        Self::polytope(planes, Point::zeros(dim))
    }

    /// `axes` columns must be orthonormal; radii positive.
    pub fn ellipsoid(center: Point, axes: DMatrix<f64>, radii: DVector<f64>) -> Result<Self> {
        let dim = center.len();
        if dim < 2 {
            return Err(Error::InvalidBody("dimension must be at least 2".into()));
        }
        if axes.nrows() != dim || axes.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: axes.nrows() });
        }
        check_dim(dim, radii.len())?;
        if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::InvalidBody("ellipsoid radii must be positive".into()));
        }
        let gram = axes.tr_mul(&axes);
        if (gram - DMatrix::identity(dim, dim)).abs().max() > 1e-9 {
            return Err(Error::InvalidBody("ellipsoid axes must be orthonormal".into()));
        }
        let scale = center.iter().chain(radii.iter()).map(|v| v.abs()).fold(0.0, f64::max);
        let witness = center.clone();
        Self::with_witness(BodyShape::Ellipsoid(Ellipsoid { center, axes, radii }), witness, scale)
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        let dim = center.len();
        Self::ellipsoid(center, DMatrix::identity(dim, dim), DVector::from_element(dim, radius))
    }

    /// Body given by a support oracle (dimensions 2 and 3).
    pub fn oracle(oracle: SupportOracle, witness: Point) -> Result<Self> {
        let dim = oracle.dim();
        check_dim(dim, witness.len())?;
        if !(2..=3).contains(&dim) {
            return Err(Error::InvalidBody("support oracles are supported in dimensions 2 and 3".into()));
        }
        let mut scale = witness.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for k in 0..dim {
            for s in [1.0, -1.0] {
                let mut e = Point::zeros(dim);
                e[k] = s;
                let h = oracle.support(&e);
                if h.is_finite() {
                    scale = scale.max(h.abs());
                }
            }
        }
        Self::with_witness(BodyShape::SupportOracle(oracle), witness, scale)
    }

    /// The `l^p` ball `{|p - center|_p < radius}` (`1 < p < ∞`) as a support oracle.
    pub fn lp_ball(center: Point, radius: f64, p: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() || !(radius > 0.0) {
            return Err(Error::InvalidBody("lp ball needs 1 < p < inf and radius > 0".into()));
        }
        let dim = center.len();
        let q = p / (p - 1.0);
        let c1 = center.clone();
        let c2 = center.clone();
        let oracle = SupportOracle::new(
            dim,
            move |u: &Point| {
                let qn = u.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q);
                u.dot(&c1) + radius * qn
            },
            move |u: &Point| {
                let qn = u.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q);
                let dir = u.map(|v| v.signum() * (v.abs() / qn).powf(q - 1.0));
                &c2 + dir * radius
            },
        );
        Self::oracle(oracle, center)
    }

    fn with_witness(shape: BodyShape, witness: Point, scale: f64) -> Result<Self> {
        if witness.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBody("non-finite witness".into()));
        }
        let body = Self { shape, witness, scale: if scale > 0.0 { scale } else { 1.0 } };
        if !body.contains_interior(&body.witness)? {
            return Err(Error::InvalidBody("witness point is not interior (empty interior?)".into()));
        }
        Ok(body)
    }

    pub fn shape(&self) -> &BodyShape {
        &self.shape
    }

    pub fn witness(&self) -> &Point {
        &self.witness
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.witness.len()
    }

    pub fn is_polytope(&self) -> bool {
        matches!(self.shape, BodyShape::HalfspacePolytope(_))
    }

    pub fn facets(&self) -> Option<&[Hyperplane]> {
        match &self.shape {
            BodyShape::HalfspacePolytope(h) => Some(h),
            _ => None,
        }
    }

    /// Open-interior membership with the relative margin [`INTERIOR_MARGIN`].
    ///
    /// Ellipsoids apply the margin to the gauge `|pullback(x)| < 1 - margin`.
    pub fn contains_interior(&self, x: &Point) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        if x.iter().any(|v| !v.is_finite()) {
            return Ok(false);
        }
        let margin = INTERIOR_MARGIN * self.scale;
        Ok(match &self.shape {
            BodyShape::HalfspacePolytope(hs) => hs.iter().all(|h| h.slack(x) > margin),
            BodyShape::Ellipsoid(e) => 1.0 - e.gauge(x) > INTERIOR_MARGIN,
            BodyShape::SupportOracle(o) => o.gap(x).0 > margin,
        })
    }

    fn require_interior(&self, x: &Point) -> Result<()> {
        if self.contains_interior(x)? {
            Ok(())
        } else {
            Err(Error::PointNotInterior)
        }
    }

    /// Whether `x` lies in the open body, without the interior margin.
    fn strictly_inside(&self, x: &Point) -> bool {
        match &self.shape {
            BodyShape::HalfspacePolytope(hs) => hs.iter().all(|h| h.slack(x) > 0.0),
            BodyShape::Ellipsoid(e) => e.gauge(x) < 1.0,
            BodyShape::SupportOracle(o) => o.gap(x).0 > 0.0,
        }
    }

    /// First boundary point on the ray `x + tξ`, `t > 0`, or `None` if the ray
    /// never leaves the body. `xi` must be a unit vector.
    pub fn ray_exit(&self, x: &Point, xi: &Point) -> Result<Option<BoundaryHit>> {
        check_dim(self.dim(), xi.len())?;
        self.require_interior(x)?;
        if (xi.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::NumericFailure("ray direction must be a unit vector".into()));
        }
        self.ray_exit_unchecked(x, xi)
    }

    /// Exit parameter only, skipping the active-set computation.
    pub(crate) fn exit_time_unchecked(&self, x: &Point, xi: &Point) -> Result<Option<f64>> {
        match &self.shape {
            BodyShape::HalfspacePolytope(hs) => {
                let mut t_exit = f64::INFINITY;
                for h in hs {
                    let rate = h.normal().dot(xi);
                    if rate > 0.0 {
                        t_exit = t_exit.min(h.slack(x) / rate);
                    }
                }
                Ok(t_exit.is_finite().then_some(t_exit))
            }
            BodyShape::Ellipsoid(e) => {
                let z = e.pullback(x);
                let w = e.pullback_dir(xi);
                Ok(Some(unit_ball_exit(&z, &w)))
            }
            BodyShape::SupportOracle(_) => Ok(self.ray_exit_unchecked(x, xi)?.map(|h| h.t_exit)),
        }
    }

    pub(crate) fn ray_exit_unchecked(&self, x: &Point, xi: &Point) -> Result<Option<BoundaryHit>> {
        match &self.shape {
            BodyShape::HalfspacePolytope(hs) => {
                let mut t_exit = f64::INFINITY;
                for h in hs {
                    let rate = h.normal().dot(xi);
                    if rate > 0.0 {
                        t_exit = t_exit.min(h.slack(x) / rate);
                    }
                }
                if !t_exit.is_finite() {
                    return Ok(None);
                }
                let point = x + xi * t_exit;
                let tol = ACTIVE_TOL * self.scale;
                let mut active = Vec::new();
                let mut facets = Vec::new();
                for (i, h) in hs.iter().enumerate() {
                    if h.slack(&point).abs() <= tol {
                        active.push(h.clone());
                        facets.push(i);
                    }
                }
                Ok(Some(BoundaryHit { point, t_exit, active, facets }))
            }
            BodyShape::Ellipsoid(e) => {
                let t_exit = unit_ball_exit(&e.pullback(x), &e.pullback_dir(xi));
                let point = x + xi * t_exit;
                let plane = self.ellipsoid_tangent(e, &point)?;
                Ok(Some(BoundaryHit { point, t_exit, active: vec![plane], facets: vec![] }))
            }
            BodyShape::SupportOracle(o) => self.oracle_ray_exit(o, x, xi),
        }
    }

    fn ellipsoid_tangent(&self, e: &Ellipsoid, b: &Point) -> Result<Hyperplane> {
        let z = e.pullback(b);
        let grad = &e.axes * z.component_div(&e.radii);
        let n = grad.normalize();
        let offset = n.dot(&e.center) + e.stretch(&n).norm();
        Hyperplane::normalized(n, offset)
    }

    fn oracle_ray_exit(&self, o: &SupportOracle, x: &Point, xi: &Point) -> Result<Option<BoundaryHit>> {
        let scale = self.scale;
        let mut lo = 0.0;
        let mut hi = scale.max(1e-300);
        let mut doublings = 0;
        while self.strictly_inside(&(x + xi * hi)) {
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings > 60 {
                return Ok(None);
            }
        }
        if !hi.is_finite() {
            return Err(Error::NumericFailure("oracle bisection failed to bracket the boundary".into()));
        }
        let tol = ORACLE_BISECTION_TOL * scale;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.strictly_inside(&(x + xi * mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t_exit = 0.5 * (lo + hi);
        let point = x + xi * t_exit;
        let (_, u) = o.gap(&point);
        let plane = Hyperplane::normalized(u.clone(), o.support(&u))?;
        Ok(Some(BoundaryHit { point, t_exit, active: vec![plane], facets: vec![] }))
    }

    /// Supporting hyperplanes at a boundary point `b`.
    pub fn supporting_hyperplanes_at(&self, b: &Point) -> Result<Vec<Hyperplane>> {
        check_dim(self.dim(), b.len())?;
        let tol = ACTIVE_TOL * self.scale;
        match &self.shape {
            BodyShape::HalfspacePolytope(hs) => {
                if hs.iter().any(|h| h.slack(b) < -tol) {
                    return Err(Error::PointNotOnBoundary);
                }
                let active: Vec<_> = hs.iter().filter(|h| h.slack(b).abs() <= tol).cloned().collect();
                if active.is_empty() {
                    Err(Error::PointNotOnBoundary)
                } else {
                    Ok(active)
                }
            }
            BodyShape::Ellipsoid(e) => {
                if (e.gauge(b) - 1.0).abs() > ACTIVE_TOL {
                    return Err(Error::PointNotOnBoundary);
                }
                Ok(vec![self.ellipsoid_tangent(e, b)?])
            }
            BodyShape::SupportOracle(o) => {
                let (gap, u) = o.gap(b);
                if gap.abs() > tol.max(1e-9) {
                    return Err(Error::PointNotOnBoundary);
                }
                Ok(vec![Hyperplane::normalized(u.clone(), o.support(&u))?])
            }
        }
    }

    /// `h(u) = sup_{p∈Ω} u·p` for unit `u`.
    pub fn support_function(&self, u: &Point) -> Result<f64> {
        self.support_point(u).map(|(h, _)| h)
    }

    /// Support value and a boundary point attaining it.
    pub fn support_point(&self, u: &Point) -> Result<(f64, Point)> {
        check_dim(self.dim(), u.len())?;
        match &self.shape {
            BodyShape::HalfspacePolytope(hs) => polytope_support(hs, u, self.scale),
            BodyShape::Ellipsoid(e) => {
                let s = e.stretch(u);
                let len = s.norm();
                let point = &e.center + &e.axes * s.component_mul(&e.radii) / len;
                Ok((u.dot(&e.center) + len, point))
            }
            BodyShape::SupportOracle(o) => {
                let h = o.support(u);
                if h.is_finite() {
                    Ok((h, o.boundary_point(u)))
                } else {
                    Err(Error::Unbounded)
                }
            }
        }
    }

    /// `r(x, ξ) = sup{t : x + tξ ∈ Ω}`; infinite along recession directions.
    pub fn radial_function(&self, x: &Point, xi: &Point) -> Result<f64> {
        Ok(self.ray_exit(x, xi)?.map_or(f64::INFINITY, |hit| hit.t_exit))
    }

    /// True when every coordinate direction has a finite support value.
    pub fn is_bounded(&self) -> bool {
        let d = self.dim();
        if let BodyShape::HalfspacePolytope(hs) = &self.shape {
            // Bounded iff the recession cone {v : n·v ≤ 0} is {0}: every vertex
            // of the cone cut by the unit cube must be the origin.
            let mut rows: Vec<(Point, f64)> = hs.iter().map(|h| (h.normal().clone(), 0.0)).collect();
            for k in 0..d {
                for s in [1.0, -1.0] {
                    let mut e = Point::zeros(d);
                    e[k] = s;
                    rows.push((e, 1.0));
                }
            }
            let mut bounded = true;
            return for_each_vertex(&rows, d, 1e-12, |v| bounded &= v.amax() <= 1e-9).is_ok() && bounded;
        }
        (0..d).all(|k| {
            [1.0, -1.0].iter().all(|s| {
                let mut e = Point::zeros(d);
                e[k] = *s;
                self.support_function(&e).is_ok_and(f64::is_finite)
            })
        })
    }

    /// Vertices of a bounded polytope (dimension ≤ 4).
    pub fn polytope_vertices(&self) -> Result<Vec<Point>> {
        let hs = self.facets().ok_or_else(|| Error::InvalidBody("not a polytope".into()))?;
        let d = self.dim();
        let rows: Vec<(Point, f64)> = hs.iter().map(|h| (h.normal().clone(), h.offset())).collect();
        let tol = 1e-9 * self.scale;
        let mut out: Vec<Point> = Vec::new();
        for_each_vertex(&rows, d, tol, |v| {
            if !out.iter().any(|w| (w - v).norm() <= 1e-9 * self.scale) {
                out.push(v.clone());
            }
        })?;
        Ok(out)
    }

    /// Image of the body under `p ↦ A p + t` for invertible `A`.
    pub fn affine_image(&self, a: &DMatrix<f64>, t: &Point) -> Result<Self> {
        let d = self.dim();
        if a.nrows() != d || a.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: a.nrows() });
        }
        check_dim(d, t.len())?;
        let a_inv = a.clone().try_inverse().ok_or_else(|| Error::InvalidBody("singular affine map".into()))?;
        let witness = a * &self.witness + t;
        match &self.shape {
            BodyShape::HalfspacePolytope(hs) => {
                let planes = hs
                    .iter()
                    .map(|h| {
                        let n = a_inv.tr_mul(h.normal());
                        let c = h.offset() + n.dot(t);
                        Hyperplane::normalized(n, c)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::polytope(planes, witness)
            }
            BodyShape::Ellipsoid(e) => {
                let m = a * &e.axes * DMatrix::from_diagonal(&e.radii);
                let svd = m.svd(true, true);
                let u = svd.u.ok_or_else(|| Error::NumericFailure("svd failed".into()))?;
                Self::ellipsoid(a * &e.center + t, u, svd.singular_values)
            }
            BodyShape::SupportOracle(o) => {
                let (o1, o2) = (o.clone(), o.clone());
                let (a1, a2) = (a.clone(), a.clone());
                let (t1, t2) = (t.clone(), t.clone());
                let mapped = SupportOracle::new(
                    d,
                    move |u: &Point| {
                        let v = a1.tr_mul(u);
                        let len = v.norm();
                        u.dot(&t1) + len * o1.support(&(v / len))
                    },
                    move |u: &Point| {
                        let v = a2.tr_mul(u).normalize();
                        &a2 * o2.boundary_point(&v) + &t2
                    },
                );
                Self::oracle(mapped, witness)
            }
        }
    }
}

/// Positive root of `|z + t w| = 1` for `|z| < 1`, without cancellation.
fn unit_ball_exit(z: &Point, w: &Point) -> f64 {
    let a = w.norm_squared();
    let b = z.dot(w);
    let c = 1.0 - z.norm_squared();
    let disc = (b * b + a * c).sqrt();
    if b >= 0.0 {
        c / (b + disc)
    } else {
        (disc - b) / a
    }
}

/// Calls `visit` on every vertex of `{p : n_i·p <= c_i}` (with repeats).
fn for_each_vertex<F: FnMut(&Point)>(rows: &[(Point, f64)], d: usize, tol: f64, mut visit: F) -> Result<()> {
    let m = rows.len();
    if d > 4 {
        return Err(Error::InvalidBody("vertex enumeration is limited to dimension 4".into()));
    }
    if m < d {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let mut mat = DMatrix::zeros(d, d);
        let mut rhs = DVector::zeros(d);
        for (r, &i) in idx.iter().enumerate() {
            mat.row_mut(r).copy_from(&rows[i].0.transpose());
            rhs[r] = rows[i].1;
        }
        if mat.determinant().abs() > 1e-12 {
            if let Some(v) = mat.lu().solve(&rhs) {
                if rows.iter().all(|(n, c)| n.dot(&v) <= c + tol) {
                    visit(&v);
                }
            }
        }
        // Next combination in lexicographic order.
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            if idx[k] < m - d + k {
                idx[k] += 1;
                for j in k + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Maximizes `u·p` over the polytope by vertex enumeration on the polytope
/// clipped to a large box. The box is doubled once: a bounded optimum does not
/// move, an unbounded one grows with the box.
fn polytope_support(hs: &[Hyperplane], u: &Point, scale: f64) -> Result<(f64, Point)> {
    let d = u.len();
    let tol = 1e-9 * scale;
    let solve = |bound: f64| -> Result<Option<(f64, Point)>> {
        let mut rows: Vec<(Point, f64)> = hs.iter().map(|h| (h.normal().clone(), h.offset())).collect();
        for k in 0..d {
            for s in [1.0, -1.0] {
                let mut e = Point::zeros(d);
                e[k] = s;
                rows.push((e, bound));
            }
        }
        let mut best: Option<(f64, Point)> = None;
        for_each_vertex(&rows, d, tol.max(1e-12 * bound), |v| {
            let val = u.dot(v);
            if best.as_ref().is_none_or(|(b, _)| val > *b) {
                best = Some((val, v.clone()));
            }
        })?;
        Ok(best)
    };
    let big = 1e6 * scale;
    let first = solve(big)?.ok_or_else(|| Error::InvalidBody("polytope is empty".into()))?;
    let second = solve(2.0 * big)?.ok_or_else(|| Error::InvalidBody("polytope is empty".into()))?;
    if second.0 - first.0 > 1e-6 * big {
        return Err(Error::Unbounded);
    }
    Ok(first)
}
