//! The Funk metric on a Euclidean convex body, in three formulations, and the
//! Hilbert metric built from it.
//!
//! - `F1` ([`funk_f1`]): `log(|x - b| / |y - b|)` where `b` is the exit point of
//!   the ray from `x` through `y`.
//! - `F2` ([`funk_f2`]): `sup_π log(d(x, π) / d(y, π))` over supporting
//!   hyperplanes `π`.
//! - `F3` ([`funk_f3`]): the infimum over paths of the length measured by the
//!   Finsler norm `p_x(ξ) = 1 / r_x(ξ)` ([`finsler_norm`]).
//!
//! On a convex body the three agree. `F2` is reported clamped at zero, with the
//! raw supremum alongside; the two differ only on unbounded bodies whose ray
//! never reaches the boundary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::euclid_convex::{distance_to_hyperplane, BodyShape, BoundaryHit, ConvexBody, Hyperplane, Point};
use crate::pathopt::{coordinate_descent, DescentOptions, PERTURBED_SWEEPS};
use crate::quadrature::integrate;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    F1,
    F2Raw,
    F2,
    F3,
    Hilbert,
}

/// What realized a Funk value.
#[derive(Debug, Clone, PartialEq)]
pub enum Attainment {
    /// Boundary exit of the ray from `x` through `y`.
    Hit(BoundaryHit),
    /// The maximizing hyperplane of the `F2` supremum; `facet` when the body is a polytope.
    Hyperplane { plane: Hyperplane, facet: Option<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunkValue {
    pub value: f64,
    /// Unclamped value. Differs from `value` only for `F2` with a negative supremum.
    pub raw: f64,
    pub formulation: Formulation,
    pub attained_at: Option<Attainment>,
}

impl FunkValue {
    fn zero(formulation: Formulation) -> Self {
        Self { value: 0.0, raw: 0.0, formulation, attained_at: None }
    }
}

fn require_interior(body: &ConvexBody, x: &Point) -> Result<()> {
    if body.contains_interior(x)? {
        Ok(())
    } else {
        Err(Error::PointNotInterior)
    }
}

/// Funk distance from the ray exit point. Zero when the ray never leaves the body.
pub fn funk_f1(body: &ConvexBody, x: &Point, y: &Point) -> Result<FunkValue> {
    require_interior(body, x)?;
    require_interior(body, y)?;
    let diff = y - x;
    let len = diff.norm();
    if len == 0.0 {
        return Ok(FunkValue::zero(Formulation::F1));
    }
    let xi = diff / len;
    Ok(match body.ray_exit_unchecked(x, &xi)? {
        None => FunkValue::zero(Formulation::F1),
        Some(hit) => {
            // log(t / (t - len)) without cancellation.
            let value = -(-len / hit.t_exit).ln_1p();
            FunkValue { value, raw: value, formulation: Formulation::F1, attained_at: Some(Attainment::Hit(hit)) }
        }
    })
}

/// Settings for the numerical supremum on smooth and oracle bodies.
#[derive(Debug, Clone, Copy)]
pub struct F2Options {
    /// Random ascent starts in addition to the ray-exit normal.
    pub random_starts: usize,
    /// Riemannian gradient norm at which an ascent counts as converged.
    pub grad_tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for F2Options {
    fn default() -> Self {
        Self { random_starts: 32, grad_tol: 1e-10, max_iters: 2000, seed: 0x0f2_5eed }
    }
}

/// `sup_π log(d(x,π)/d(y,π))` with default [`F2Options`].
pub fn funk_f2(body: &ConvexBody, x: &Point, y: &Point) -> Result<FunkValue> {
    funk_f2_with(body, x, y, &F2Options::default())
}

pub fn funk_f2_with(body: &ConvexBody, x: &Point, y: &Point, opts: &F2Options) -> Result<FunkValue> {
    require_interior(body, x)?;
    require_interior(body, y)?;
    if x == y {
        return Ok(FunkValue::zero(Formulation::F2));
    }
    let (raw, plane, facet) = match body.shape() {
        BodyShape::HalfspacePolytope(hs) => {
            let mut best = (f64::NEG_INFINITY, 0usize);
            for (i, h) in hs.iter().enumerate() {
                let r = (h.slack(x) / h.slack(y)).ln();
                if r > best.0 {
                    best = (r, i);
                }
            }
            (best.0, hs[best.1].clone(), Some(best.1))
        }
        _ => {
            let (raw, u) = smooth_sup(body, x, y, opts)?;
            let h = body.support_function(&u)?;
            (raw, Hyperplane::normalized(u, h)?, None)
        }
    };
    Ok(FunkValue {
        value: raw.max(0.0),
        raw,
        formulation: Formulation::F2,
        attained_at: Some(Attainment::Hyperplane { plane, facet }),
    })
}

/// Multistart Riemannian gradient ascent of
/// `u ↦ log((h(u) - u·x) / (h(u) - u·y))` on the unit sphere. The gradient of
/// `h` at `u` is the boundary point attaining the support.
fn smooth_sup(body: &ConvexBody, x: &Point, y: &Point, opts: &F2Options) -> Result<(f64, Point)> {
    let d = body.dim();
    let objective = |u: &Point| -> Option<(f64, Point)> {
        let (h, p) = body.support_point(u).ok()?;
        let sx = h - u.dot(x);
        let sy = h - u.dot(y);
        if !(sx > 0.0 && sy > 0.0) {
            return None;
        }
        let grad = (&p - x) / sx - (&p - y) / sy;
        let tangent = &grad - u * u.dot(&grad);
        Some(((sx / sy).ln(), tangent))
    };

    let mut starts: Vec<Point> = Vec::new();
    let diff = y - x;
    if diff.norm() > 0.0 {
        if let Some(hit) = body.ray_exit_unchecked(x, &diff.normalize())? {
            starts.extend(hit.active.iter().map(|h| h.normal().clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_starts {
        let g = Point::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        starts.push(g.normalize());
    }

    let mut best: Option<(f64, Point)> = None;
    let mut any_converged = false;
    for start in starts {
        let Some((mut val, mut grad)) = objective(&start) else { continue };
        let mut u = start;
        // Step length per unit gradient; Barzilai–Borwein after accepted steps.
        let mut alpha = 0.1 / grad.norm().max(1.0);
        let mut converged = false;
        for _ in 0..opts.max_iters {
            let gn = grad.norm();
            if gn <= opts.grad_tol {
                converged = true;
                break;
            }
            let cand = (&u + &grad * alpha).normalize();
            match objective(&cand) {
                Some((v, g)) if v >= val && cand != u => {
                    let s = &cand - &u;
                    let sy = s.dot(&(&g - &grad));
                    alpha = if sy < 0.0 { (s.norm_squared() / -sy).clamp(1e-12, 1e3) } else { (alpha * 2.0).min(1e3) };
                    u = cand;
                    val = v;
                    grad = g;
                }
                _ => {
                    alpha *= 0.5;
                    if alpha * gn < 1e-17 {
                        // No representable ascent step remains.
                        converged = gn <= 1e-6;
                        break;
                    }
                }
            }
        }
        any_converged |= converged;
        if best.as_ref().is_none_or(|(b, _)| val > *b) {
            best = Some((val, u));
        }
    }
    match best {
        Some(b) if any_converged => Ok(b),
        _ => Err(Error::NumericFailure("no ascent start converged for the F2 supremum".into())),
    }
}

/// Finsler norm `p_x(ξ) = |ξ| / r_x(ξ/|ξ|)`; zero along recession directions.
pub fn finsler_norm(body: &ConvexBody, x: &Point, xi: &Point) -> Result<f64> {
    require_interior(body, x)?;
    finsler_norm_unchecked(body, x, xi)
}

fn finsler_norm_unchecked(body: &ConvexBody, x: &Point, xi: &Point) -> Result<f64> {
    let len = xi.norm();
    if len == 0.0 {
        return Ok(0.0);
    }
    Ok(match body.exit_time_unchecked(x, &(xi / len))? {
        Some(t) => len / t,
        None => 0.0,
    })
}

/// The hyperplane form `max(0, sup_π ⟨n_π, ξ⟩ / d(x, π))`. Exact over facets for
/// polytopes; for smooth bodies the supremum is taken over the tangent plane at
/// the ray exit, which is where it is attained.
pub fn finsler_norm_dual(body: &ConvexBody, x: &Point, xi: &Point) -> Result<f64> {
    require_interior(body, x)?;
    let sup = match body.shape() {
        BodyShape::HalfspacePolytope(hs) => hs
            .iter()
            .map(|h| h.normal().dot(xi) / h.slack(x))
            .fold(f64::NEG_INFINITY, f64::max),
        _ => {
            let len = xi.norm();
            if len == 0.0 {
                return Ok(0.0);
            }
            match body.ray_exit_unchecked(x, &(xi / len))? {
                Some(hit) => hit
                    .active
                    .iter()
                    .map(|h| h.normal().dot(xi) / distance_to_hyperplane(x, h).unwrap_or(f64::INFINITY))
                    .fold(f64::NEG_INFINITY, f64::max),
                None => 0.0,
            }
        }
    };
    Ok(sup.max(0.0))
}

/// Piecewise-linear path through `knots`, each segment traversed at uniform speed.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePath {
    knots: Vec<Point>,
}

impl PiecewisePath {
    /// Needs at least two knots of equal dimension. Repeated knots are allowed
    /// and contribute zero-length segments.
    pub fn new(knots: Vec<Point>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::NumericFailure("a path needs at least two knots".into()));
        }
        let d = knots[0].len();
        if let Some(k) = knots.iter().find(|k| k.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: k.len() });
        }
        Ok(Self { knots })
    }

    pub fn segment(x: Point, y: Point) -> Self {
        Self { knots: vec![x, y] }
    }

    pub fn knots(&self) -> &[Point] {
        &self.knots
    }
}

/// Absolute quadrature tolerance per segment of a Euclidean path.
pub const PATH_QUAD_TOL: f64 = 1e-9;

fn segment_length(body: &ConvexBody, a: &Point, b: &Point) -> Result<f64> {
    let v = b - a;
    if v.norm() == 0.0 {
        return Ok(0.0);
    }
    integrate(|t| finsler_norm_unchecked(body, &(a + &v * t), &v), 0.0, 1.0, PATH_QUAD_TOL)
}

/// Finsler length of a piecewise-linear path.
pub fn funk_path_length(body: &ConvexBody, path: &PiecewisePath) -> Result<f64> {
    for k in &path.knots {
        require_interior(body, k)?;
    }
    path.knots.windows(2).map(|w| segment_length(body, &w[0], &w[1])).sum()
}

#[derive(Debug, Clone, Copy)]
pub struct F3Options {
    /// Movable interior knots.
    pub knots: usize,
    /// Randomly perturbed starts in addition to the straight segment.
    pub restarts: usize,
    /// Sweep improvement below which coordinate descent stops.
    pub tol: f64,
    pub seed: u64,
}

impl Default for F3Options {
    fn default() -> Self {
        Self { knots: 5, restarts: 8, tol: 1e-10, seed: 0x0f3_5eed }
    }
}

/// Minimal Finsler length over paths with `opts.knots` interior knots.
pub fn funk_f3(body: &ConvexBody, x: &Point, y: &Point, opts: &F3Options) -> Result<FunkValue> {
    require_interior(body, x)?;
    require_interior(body, y)?;
    let diff = y - x;
    let len = diff.norm();
    if len == 0.0 {
        return Ok(FunkValue::zero(Formulation::F3));
    }
    let k = opts.knots;
    let straight: Vec<Point> = (0..k + 2).map(|i| x + &diff * (i as f64 / (k + 1) as f64)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let seg_cost = |a: &[f64], b: &[f64]| -> Option<f64> {
        let a = Point::from_column_slice(a);
        let b = Point::from_column_slice(b);
        if !body.contains_interior(&a).ok()? || !body.contains_interior(&b).ok()? {
            return None;
        }
        segment_length(body, &a, &b).ok()
    };

    let mut best = f64::INFINITY;
    let mut failure = None;
    for restart in 0..=opts.restarts {
        let mut init = straight.clone();
        if restart > 0 {
            for knot in init.iter_mut().take(k + 1).skip(1) {
                let mut amp = 0.15 * len;
                for _ in 0..30 {
                    let g = Point::from_fn(knot.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
                    let cand = &*knot + g * amp;
                    if body.contains_interior(&cand)? {
                        *knot = cand;
                        break;
                    }
                    amp *= 0.5;
                }
            }
        }
        let mut chart: Vec<Vec<f64>> = init.iter().map(|p| p.as_slice().to_vec()).collect();
        let mut descent = DescentOptions::for_length(len, opts.tol);
        if restart > 0 {
            descent.max_sweeps = PERTURBED_SWEEPS;
        }
        match coordinate_descent(&mut chart, seg_cost, descent) {
            Some(v) => best = best.min(v),
            None => failure = Some(Error::NumericFailure("path length evaluation failed".into())),
        }
    }
    if !best.is_finite() {
        return Err(failure.unwrap_or_else(|| Error::NumericFailure("no F3 start succeeded".into())));
    }
    Ok(FunkValue { value: best, raw: best, formulation: Formulation::F3, attained_at: None })
}

/// Hilbert metric `½(F1(x,y) + F1(y,x))`.
pub fn hilbert(body: &ConvexBody, x: &Point, y: &Point) -> Result<FunkValue> {
    let forward = funk_f1(body, x, y)?.value;
    let backward = funk_f1(body, y, x)?.value;
    let value = 0.5 * (forward + backward);
    Ok(FunkValue { value, raw: value, formulation: Formulation::Hilbert, attained_at: None })
}

/// `log(|x-b(x,y)| |y-b(y,x)| / (|y-b(x,y)| |x-b(y,x)|))` from the two exit points.
pub fn cross_ratio_log(body: &ConvexBody, x: &Point, y: &Point) -> Result<f64> {
    require_interior(body, x)?;
    require_interior(body, y)?;
    let diff = y - x;
    let len = diff.norm();
    if len == 0.0 {
        return Ok(0.0);
    }
    let xi = diff / len;
    let forward = body.ray_exit_unchecked(x, &xi)?.ok_or(Error::FiniteHitsRequired)?;
    let backward = body.ray_exit_unchecked(y, &(-xi))?.ok_or(Error::FiniteHitsRequired)?;
    let (b_xy, b_yx) = (forward.point, backward.point);
    Ok(((x - &b_xy).norm() * (y - &b_yx).norm() / ((y - &b_xy).norm() * (x - &b_yx).norm())).ln())
}

/// The affine line `p0 + t·dir`.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub p0: Point,
    pub dir: Point,
}

impl Line {
    pub fn at(&self, t: f64) -> Point {
        &self.p0 + &self.dir * t
    }
}

/// First and second derivatives of `t ↦ log(d(x,π) / d(s(t),π))` for `s(t) = p0 + t·dir`:
/// `d1 = ⟨n, v⟩ / d(s(t),π)` and `d2 = d1²`.
pub fn derivative_check(body: &ConvexBody, x: &Point, line: &Line, t: f64, plane: &Hyperplane) -> Result<(f64, f64)> {
    require_interior(body, x)?;
    let s = line.at(t);
    require_interior(body, &s)?;
    distance_to_hyperplane(x, plane)?;
    let d = distance_to_hyperplane(&s, plane)?;
    let d1 = plane.normal().dot(&line.dir) / d;
    Ok((d1, d1 * d1))
}

/// Which argument of `F` moves along the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `t ↦ F(x, s(t))`
    FromBase,
    /// `t ↦ F(s(t), x)`
    ToBase,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub values: Vec<f64>,
    pub second_differences: Vec<f64>,
    /// All second differences `>= -1e-9`.
    pub all_nonneg: bool,
}

pub const CONVEXITY_TOL: f64 = 1e-9;

/// Samples `F` along the line on `grid` (uniformly spaced) and returns centered
/// second differences.
pub fn convexity_profile(
    body: &ConvexBody,
    x: &Point,
    line: &Line,
    grid: &[f64],
    orientation: Orientation,
) -> Result<ConvexityReport> {
    let values = grid
        .iter()
        .map(|&t| {
            let s = line.at(t);
            let v = match orientation {
                Orientation::FromBase => funk_f1(body, x, &s)?,
                Orientation::ToBase => funk_f1(body, &s, x)?,
            };
            Ok(v.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let second_differences: Vec<f64> = values.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect();
    let all_nonneg = second_differences.iter().all(|&d| d >= -CONVEXITY_TOL);
    Ok(ConvexityReport { values, second_differences, all_nonneg })
}

/// Hilbert midpoint of `p` and `x` on the straight segment, by bisection to
/// `|H(p,m) - H(m,x)| <= 1e-10`.
pub fn hilbert_midpoint(body: &ConvexBody, p: &Point, x: &Point) -> Result<Point> {
    require_interior(body, p)?;
    require_interior(body, x)?;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let at = |l: f64| p + (x - p) * l;
    let mut m = at(0.5);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        m = at(mid);
        let f = hilbert(body, p, &m)?.value - hilbert(body, &m, x)?.value;
        if f.abs() <= 1e-10 {
            break;
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON {
            break;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn square() -> ConvexBody {
        ConvexBody::cube(2, 1.0).unwrap()
    }

    fn disk() -> ConvexBody {
        ConvexBody::ball(dvector![0.0, 0.0], 1.0).unwrap()
    }

    fn half_plane() -> ConvexBody {
        ConvexBody::polytope(vec![Hyperplane::from_slice(&[1.0, 0.0], 1.0).unwrap()], dvector![0.0, 0.0]).unwrap()
    }

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn f1_examples() {
        let v = funk_f1(&disk(), &dvector![0.0, 0.0], &dvector![0.5, 0.0]).unwrap();
        assert!((v.value - LN2).abs() < 1e-15);
        let p = dvector![0.2, -0.1];
        assert_eq!(funk_f1(&square(), &p, &p).unwrap().value, 0.0);
        assert_eq!(funk_f1(&half_plane(), &dvector![0.0, 0.0], &dvector![-1.0, 0.0]).unwrap().value, 0.0);
        assert_eq!(funk_f1(&square(), &dvector![1.0, 0.0], &p), Err(Error::PointNotInterior));
    }

    #[test]
    fn f2_examples() {
        let v = funk_f2(&square(), &dvector![0.0, 0.0], &dvector![0.5, 0.0]).unwrap();
        assert!((v.value - LN2).abs() < 1e-15);
        assert!(matches!(v.attained_at, Some(Attainment::Hyperplane { facet: Some(0), .. })));

        let v = funk_f2(&disk(), &dvector![0.0, 0.0], &dvector![0.5, 0.0]).unwrap();
        assert!((v.value - LN2).abs() < 1e-12);
        let Some(Attainment::Hyperplane { plane, .. }) = v.attained_at else { panic!() };
        assert!((plane.normal() - dvector![1.0, 0.0]).norm() < 1e-9);

        let v = funk_f2(&half_plane(), &dvector![0.0, 0.0], &dvector![-1.0, 0.0]).unwrap();
        assert!((v.raw - 0.5f64.ln()).abs() < 1e-15);
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn f2_on_oracle_body_matches_f1() {
        let body = ConvexBody::lp_ball(dvector![0.1, 0.0], 1.0, 3.0).unwrap();
        let (x, y) = (dvector![0.0, 0.2], dvector![0.4, -0.3]);
        let f1 = funk_f1(&body, &x, &y).unwrap().value;
        let f2 = funk_f2(&body, &x, &y).unwrap().value;
        assert!((f1 - f2).abs() < 1e-6, "{f1} {f2}");
    }

    #[test]
    fn finsler_norm_examples() {
        let o = dvector![0.0, 0.0];
        assert!((finsler_norm(&disk(), &o, &dvector![0.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((finsler_norm(&disk(), &o, &dvector![2.0, 0.0]).unwrap() - 2.0).abs() < 1e-15);
        let x = dvector![0.5, 0.0];
        assert!((finsler_norm(&square(), &x, &dvector![1.0, 0.0]).unwrap() - 2.0).abs() < 1e-15);
        assert!((finsler_norm_dual(&square(), &x, &dvector![1.0, 0.0]).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(finsler_norm(&half_plane(), &o, &dvector![-1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(finsler_norm_dual(&half_plane(), &o, &dvector![-1.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn path_length_examples() {
        let o = dvector![0.0, 0.0];
        let constant = PiecewisePath::new(vec![o.clone(), o.clone()]).unwrap();
        assert_eq!(funk_path_length(&disk(), &constant).unwrap(), 0.0);
        let straight = PiecewisePath::segment(o.clone(), dvector![0.5, 0.0]);
        assert!((funk_path_length(&disk(), &straight).unwrap() - LN2).abs() < 1e-8);
        let detour = PiecewisePath::new(vec![o, dvector![0.25, 0.3], dvector![0.5, 0.0]]).unwrap();
        let l = funk_path_length(&disk(), &detour).unwrap();
        assert!(l >= LN2, "{l}");
        assert!(PiecewisePath::new(vec![dvector![0.0, 0.0]]).is_err());
    }

    #[test]
    fn f3_examples() {
        let opts = F3Options::default();
        let v = funk_f3(&disk(), &dvector![0.0, 0.0], &dvector![0.5, 0.0], &opts).unwrap();
        assert!((v.value - LN2).abs() < 1e-6, "{}", v.value);
        let p = dvector![0.1, 0.1];
        assert_eq!(funk_f3(&disk(), &p, &p, &opts).unwrap().value, 0.0);
        let v = funk_f3(&square(), &dvector![-0.5, 0.0], &dvector![0.5, 0.4], &opts).unwrap();
        assert!((v.value - 3f64.ln()).abs() < 1e-6, "{}", v.value);
    }

    #[test]
    fn hilbert_examples() {
        let (o, y) = (dvector![0.0, 0.0], dvector![0.5, 0.0]);
        let half_ln3 = 0.5 * 3f64.ln();
        assert!((hilbert(&disk(), &o, &y).unwrap().value - half_ln3).abs() < 1e-15);
        assert!((hilbert(&disk(), &o, &y).unwrap().value - 0.5f64.atanh()).abs() < 1e-15);
        assert!((hilbert(&square(), &o, &y).unwrap().value - half_ln3).abs() < 1e-15);
        assert_eq!(hilbert(&square(), &y, &y).unwrap().value, 0.0);
    }

    #[test]
    fn cross_ratio_examples() {
        let v = cross_ratio_log(&disk(), &dvector![0.0, 0.0], &dvector![0.5, 0.0]).unwrap();
        assert!((v - 3f64.ln()).abs() < 1e-15);
        let v = cross_ratio_log(&disk(), &dvector![-0.3, 0.0], &dvector![0.3, 0.0]).unwrap();
        assert!((v - 2.0 * (13.0f64 / 7.0).ln()).abs() < 1e-14);
        let p = dvector![0.3, 0.3];
        assert_eq!(cross_ratio_log(&disk(), &p, &p).unwrap(), 0.0);
        assert_eq!(
            cross_ratio_log(&half_plane(), &dvector![0.0, 0.0], &dvector![0.5, 0.0]),
            Err(Error::FiniteHitsRequired)
        );
    }

    #[test]
    fn derivative_examples() {
        let pi = Hyperplane::from_slice(&[1.0, 0.0], 1.0).unwrap();
        let line = Line { p0: dvector![0.0, 0.0], dir: dvector![1.0, 0.0] };
        let x = dvector![-0.5, 0.0];
        assert_eq!(derivative_check(&square(), &x, &line, 0.0, &pi).unwrap(), (1.0, 1.0));
        assert_eq!(derivative_check(&square(), &x, &line, 0.5, &pi).unwrap(), (2.0, 4.0));
        let parallel = Line { p0: dvector![0.0, 0.0], dir: dvector![0.0, 1.0] };
        assert_eq!(derivative_check(&square(), &x, &parallel, 0.3, &pi).unwrap(), (0.0, 0.0));
        let far = Hyperplane::from_slice(&[1.0, 0.0], 0.2).unwrap();
        assert_eq!(derivative_check(&square(), &x, &line, 0.5, &far), Err(Error::PointOutsideHalfspace));
    }

    #[test]
    fn convexity_examples() {
        let grid: Vec<f64> = (0..21).map(|i| -0.5 + 0.05 * i as f64).collect();
        let line = Line { p0: dvector![0.0, 0.3], dir: dvector![1.0, 0.0] };
        let o = dvector![0.0, 0.0];
        let r = convexity_profile(&disk(), &o, &line, &grid, Orientation::FromBase).unwrap();
        assert!(r.all_nonneg, "{:?}", r.second_differences);

        let through_base = Line { p0: dvector![0.0, 0.0], dir: dvector![1.0, 0.0] };
        let grid: Vec<f64> = (0..21).map(|i| 0.1 + 0.03 * i as f64).collect();
        let r = convexity_profile(&disk(), &o, &through_base, &grid, Orientation::ToBase).unwrap();
        assert!(r.second_differences.iter().any(|&d| d < -1e-9));

        let line = Line { p0: dvector![0.0, -0.5], dir: dvector![0.6, 0.8] };
        let r = convexity_profile(&half_plane(), &o, &line, &grid, Orientation::FromBase).unwrap();
        assert!(r.second_differences.iter().all(|&d| d >= -1e-15));
    }

    #[test]
    fn hilbert_midpoint_is_equidistant() {
        let (p, x) = (dvector![-0.4, 0.1], dvector![0.6, 0.3]);
        let m = hilbert_midpoint(&disk(), &p, &x).unwrap();
        let a = hilbert(&disk(), &p, &m).unwrap().value;
        let b = hilbert(&disk(), &m, &x).unwrap().value;
        assert!((a - b).abs() <= 1e-10);
    }
}
