//! Properties of the Funk and Hilbert metrics on convex bodies.

use std::collections::BTreeMap;

use funkspace_core::euclid_convex::{ConvexBody, Point, INTERIOR_MARGIN};
use funkspace_core::funk_euclid::{
    convexity_profile, derivative_check, funk_f1, funk_f2_with, funk_f3, funk_path_length, hilbert, hilbert_midpoint,
    Line, Orientation, PiecewisePath, CONVEXITY_TOL, PATH_QUAD_TOL,
};
use funkspace_core::sampling;
use nalgebra::dvector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{bound, coords, witness, Observation, PropertyReport, Trial, VerifyOptions};

/// Fraction of the way to the boundary at which random points are drawn.
const POINT_FRAC: f64 = 0.95;

fn dim_for(opts: &VerifyOptions, i: usize) -> usize {
    opts.dims[i % opts.dims.len()]
}

fn polytope(rng: &mut ChaCha8Rng, dim: usize) -> funkspace_core::Result<ConvexBody> {
    let facets = rng.random_range(dim + 1..=20);
    sampling::polytope(rng, dim, facets)
}

/// Polytopes on even trials, ellipsoids on odd ones.
fn bounded_body(rng: &mut ChaCha8Rng, opts: &VerifyOptions, i: usize) -> funkspace_core::Result<ConvexBody> {
    let dim = dim_for(opts, i / 2);
    if i.is_multiple_of(2) {
        polytope(rng, dim)
    } else {
        sampling::ellipsoid(rng, dim)
    }
}

fn pts<const N: usize>(rng: &mut ChaCha8Rng, b: &ConvexBody) -> funkspace_core::Result<[Point; N]> {
    let mut out: [Point; N] = std::array::from_fn(|_| Point::zeros(0));
    for p in &mut out {
        *p = sampling::interior_point(rng, b, POINT_FRAC)?;
    }
    Ok(out)
}

fn body_json(b: &ConvexBody) -> Value {
    use funkspace_core::euclid_convex::BodyShape;
    match b.shape() {
        BodyShape::HalfspacePolytope(hs) => json!({
            "type": "halfspace_polytope",
            "halfspaces": hs.iter().map(|h| json!({"normal": coords(h.normal().iter()), "offset": h.offset()})).collect::<Vec<_>>(),
        }),
        BodyShape::Ellipsoid(e) => json!({
            "type": "ellipsoid",
            "center": coords(e.center.iter()),
            "axes": (0..e.axes.ncols()).map(|c| coords(e.axes.column(c).iter())).collect::<Vec<_>>(),
            "radii": coords(e.radii.iter()),
        }),
        BodyShape::SupportOracle(_) => json!({"type": "oracle", "witness": coords(b.witness().iter())}),
    }
}

fn disk() -> ConvexBody {
    ConvexBody::ball(dvector![0.0, 0.0], 1.0).expect("unit disk")
}

pub(super) fn run(
    opts: &VerifyOptions,
    props: &mut Vec<PropertyReport>,
    _obs: &mut Vec<Observation>,
    tolerances: &mut BTreeMap<String, Value>,
) {
    let n = opts.trials;
    let seed = opts.seed;
    let tol = opts.tol;
    tolerances.insert("interior_margin".into(), json!(INTERIOR_MARGIN));
    tolerances.insert("f2_random_starts".into(), json!(tol.f2.random_starts));
    tolerances.insert("f2_grad_tol".into(), json!(tol.f2.grad_tol));
    tolerances.insert("f2_max_iters".into(), json!(tol.f2.max_iters));
    tolerances.insert("f3_knots".into(), json!(tol.f3.knots));
    tolerances.insert("f3_restarts".into(), json!(tol.f3.restarts));
    tolerances.insert("f3_tol".into(), json!(tol.f3.tol));
    tolerances.insert("path_quad_tol".into(), json!(PATH_QUAD_TOL));
    tolerances.insert("convexity_tol".into(), json!(CONVEXITY_TOL));

    props.push(bound("klein_identity", seed, 9, 1e-10, |_, i| {
        let r = (i + 1) as f64 / 10.0;
        let h = hilbert(&disk(), &dvector![0.0, 0.0], &dvector![r, 0.0])?.value;
        Ok(Trial::new((h - r.atanh()).abs(), move || json!({"r": r, "hilbert": h})))
    }));

    props.push(bound("f1_equals_f2_polytopes", seed, n, 1e-9, |rng, i| {
        let b = polytope(rng, dim_for(opts, i))?;
        let [x, y] = pts(rng, &b)?;
        let (f1, f2) = (funk_f1(&b, &x, &y)?.value, funk_f2_with(&b, &x, &y, &tol.f2)?.value);
        Ok(Trial::new((f1 - f2).abs(), move || json!({"body": body_json(&b), "x": coords(&x), "y": coords(&y), "f1": f1, "f2": f2})))
    }));

    props.push(bound("f1_equals_f2_ellipsoids", seed, n.div_ceil(10) * 3, 1e-6, |rng, i| {
        let b = sampling::ellipsoid(rng, dim_for(opts, i))?;
        let [x, y] = pts(rng, &b)?;
        let (f1, f2) = (funk_f1(&b, &x, &y)?.value, funk_f2_with(&b, &x, &y, &tol.f2)?.value);
        Ok(Trial::new((f1 - f2).abs(), move || json!({"body": body_json(&b), "x": coords(&x), "y": coords(&y), "f1": f1, "f2": f2})))
    }));

    props.push(bound("f3_equals_f1", seed, n.div_ceil(10), 1e-6, |rng, i| {
        let b = bounded_body(rng, opts, i)?;
        let [x, y] = pts(rng, &b)?;
        let (f1, f3) = (funk_f1(&b, &x, &y)?.value, funk_f3(&b, &x, &y, &tol.f3)?.value);
        Ok(Trial::new((f3 - f1).abs(), move || json!({"body": body_json(&b), "x": coords(&x), "y": coords(&y), "f1": f1, "f3": f3})))
    }));

    props.push(bound("straight_segment_length_equals_f1", seed, n, 1e-8, |rng, i| {
        let b = bounded_body(rng, opts, i)?;
        let [x, y] = pts(rng, &b)?;
        let f1 = funk_f1(&b, &x, &y)?.value;
        let len = funk_path_length(&b, &PiecewisePath::segment(x.clone(), y.clone()))?;
        Ok(Trial::new((len - f1).abs(), move || json!({"body": body_json(&b), "x": coords(&x), "y": coords(&y), "f1": f1, "length": len})))
    }));

    type Metric = fn(&ConvexBody, &Point, &Point, &VerifyOptions) -> funkspace_core::Result<f64>;
    let metrics: [(&str, Metric); 3] = [
        ("triangle_f1", |b, x, y, _| Ok(funk_f1(b, x, y)?.value)),
        ("triangle_f2", |b, x, y, o| Ok(funk_f2_with(b, x, y, &o.tol.f2)?.value)),
        ("triangle_hilbert", |b, x, y, _| Ok(hilbert(b, x, y)?.value)),
    ];
    for (name, f) in metrics {
        props.push(bound(name, seed, 10 * n, 1e-9, |rng, i| {
            let b = bounded_body(rng, opts, i)?;
            let [x, y, z] = pts(rng, &b)?;
            let (xy, yz, xz) = (f(&b, &x, &y, opts)?, f(&b, &y, &z, opts)?, f(&b, &x, &z, opts)?);
            Ok(Trial::new(xz - xy - yz, move || {
                json!({"body": body_json(&b), "x": coords(&x), "y": coords(&y), "z": coords(&z), "xy": xy, "yz": yz, "xz": xz})
            }))
        }));
    }

    props.push(bound("exact_additivity_square_triple", seed, 1, 1e-12, |_, _| {
        let square = ConvexBody::cube(2, 1.0)?;
        let (x, y, z) = (dvector![-0.5, 0.0], dvector![0.0, 0.25], dvector![0.5, 0.4]);
        let mut worst: f64 = 0.0;
        let mut seen = Vec::new();
        for f2 in [false, true] {
            let f = |p: &Point, q: &Point| -> funkspace_core::Result<f64> {
                Ok(if f2 { funk_f2_with(&square, p, q, &tol.f2)?.value } else { funk_f1(&square, p, q)?.value })
            };
            let (xy, yz, xz) = (f(&x, &y)?, f(&y, &z)?, f(&x, &z)?);
            worst = worst
                .max((xy + yz - xz).abs())
                .max((xy - 1.5f64.ln()).abs())
                .max((yz - 2f64.ln()).abs())
                .max((xz - 3f64.ln()).abs());
            seen.push(json!({"formulation": if f2 { "f2" } else { "f1" }, "xy": xy, "yz": yz, "xz": xz}));
        }
        Ok(Trial::new(worst, move || json!(seen)))
    }));

    props.push(bound("derivative_formulas", seed, n, 1e-6, |rng, i| {
        let b = polytope(rng, dim_for(opts, i))?;
        let [x, p0] = pts(rng, &b)?;
        let dir = sampling::unit_vector(rng, b.dim());
        let facets = b.facets().expect("polytope");
        let plane = facets[rng.random_range(0..facets.len())].clone();
        let line = Line { p0, dir };
        let (d1, d2) = derivative_check(&b, &x, &line, 0.0, &plane)?;
        // Step chosen so h·|d1| = 1e-4: truncation and rounding both stay near 1e-8 relative.
        let h = 1e-4 / d1.abs().max(1.0);
        let ln_slack = |t: f64| plane.slack(&line.at(t)).ln();
        let phi0 = plane.slack(&x).ln();
        let phi = |t: f64| phi0 - ln_slack(t);
        let fd1 = (phi(h) - phi(-h)) / (2.0 * h);
        let fd2 = (phi(h) - 2.0 * phi(0.0) + phi(-h)) / (h * h);
        let rel = ((d1 - fd1).abs() / d1.abs().max(1.0)).max((d2 - fd2).abs() / d2.abs().max(1.0));
        // A negative second derivative fails outright.
        let q = if d2 < 0.0 { f64::INFINITY } else { rel };
        Ok(Trial::new(q, move || {
            json!({"x": coords(&x), "p0": coords(&line.p0), "dir": coords(&line.dir), "plane": {"normal": coords(plane.normal()), "offset": plane.offset()}, "d1": d1, "d2": d2, "fd1": fd1, "fd2": fd2})
        }))
    }));

    props.push(bound("convexity_from_base_strictly_convex", seed, n, CONVEXITY_TOL, |rng, i| {
        let b = if i % 4 == 0 { disk() } else { sampling::ellipsoid(rng, dim_for(opts, i))? };
        let [x, p0] = pts(rng, &b)?;
        let dir = sampling::unit_vector(rng, b.dim());
        let (q, grid) = line_profile(&b, &x, p0.clone(), dir.clone(), Orientation::FromBase)?;
        Ok(Trial::new(q, move || json!({"body": body_json(&b), "x": coords(&x), "p0": coords(&p0), "dir": coords(&dir), "grid": grid})))
    }));

    props.push(witness("non_convexity_to_base_on_disk", seed, n, 1e-6, |rng, _| {
        let b = disk();
        let [x, p0] = pts(rng, &b)?;
        let dir = sampling::unit_vector(rng, 2);
        let (q, grid) = line_profile(&b, &x, p0.clone(), dir.clone(), Orientation::ToBase)?;
        Ok(Trial::new(q, move || json!({"x": coords(&x), "p0": coords(&p0), "dir": coords(&dir), "grid": grid, "min_second_difference": -q})))
    }));

    props.push(bound("busemann_midpoint_disk", seed, n, 1e-9, |rng, _| {
        let b = disk();
        let [p, x, y] = pts(rng, &b)?;
        let q = midpoint_excess(&b, &p, &x, &y)?;
        Ok(Trial::new(q, move || json!({"p": coords(&p), "x": coords(&x), "y": coords(&y)})))
    }));

    props.push(witness("busemann_violation_square", seed, n, 1e-6, |rng, _| {
        let b = ConvexBody::cube(2, 1.0)?;
        let [p, x, y] = pts(rng, &b)?;
        let q = midpoint_excess(&b, &p, &x, &y)?;
        Ok(Trial::new(q, move || json!({"p": coords(&p), "x": coords(&x), "y": coords(&y), "excess": q})))
    }));

    for (name, hil) in [("affine_invariance_f1", false), ("affine_invariance_hilbert", true)] {
        props.push(bound(name, seed, n, 1e-9, |rng, i| {
            let b = bounded_body(rng, opts, i)?;
            let [x, y] = pts(rng, &b)?;
            let (a, t) = sampling::affine_map(rng, b.dim());
            let image = b.affine_image(&a, &t)?;
            let (ax, ay) = (&a * &x + &t, &a * &y + &t);
            let f = |body: &ConvexBody, p: &Point, q: &Point| -> funkspace_core::Result<f64> {
                Ok(if hil { hilbert(body, p, q)?.value } else { funk_f1(body, p, q)?.value })
            };
            let (v, va) = (f(&b, &x, &y)?, f(&image, &ax, &ay)?);
            Ok(Trial::new((v - va).abs(), move || {
                json!({"body": body_json(&b), "x": coords(&x), "y": coords(&y), "matrix": coords(a.iter()), "translation": coords(&t), "value": v, "image_value": va})
            }))
        }));
    }
}

/// Negated smallest second difference of `t ↦ F` on a 41-point grid spanning
/// 90% of the chord through `p0`.
fn line_profile(b: &ConvexBody, x: &Point, p0: Point, dir: Point, orientation: Orientation) -> funkspace_core::Result<(f64, Vec<f64>)> {
    let fwd = b.radial_function(&p0, &dir)?;
    let back = b.radial_function(&p0, &-&dir)?;
    let grid: Vec<f64> = (0..=40).map(|k| -0.9 * back + 0.9 * (fwd + back) * k as f64 / 40.0).collect();
    let rep = convexity_profile(b, x, &Line { p0, dir }, &grid, orientation)?;
    let min = rep.second_differences.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((-min, grid))
}

/// `2 H(m_x, m_y) - H(x, y)` for the Hilbert midpoints from `p`.
fn midpoint_excess(b: &ConvexBody, p: &Point, x: &Point, y: &Point) -> funkspace_core::Result<f64> {
    let mx = hilbert_midpoint(b, p, x)?;
    let my = hilbert_midpoint(b, p, y)?;
    Ok(2.0 * hilbert(b, &mx, &my)?.value - hilbert(b, x, y)?.value)
}
