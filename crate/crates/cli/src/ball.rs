//! Metric balls `{y : F(c, y) < r}` traced by radial bisection.

use std::fmt::Write as _;

use funkspace_core::euclid_convex::Point;
use funkspace_core::funk_model::first_hit;
use funkspace_core::hyperbolic_core::{domain_contains, exp_map, HTangent};
use nalgebra::{dvector, Vector3};

use crate::error::{CliError, Result};
use crate::metrics::{euclid_value, model_value, Metric, Tolerances};
use crate::scene::{Geometry, Scene};

/// Bisection stops once `|F - r|` is below this.
pub const BALL_TOL: f64 = 1e-9;
pub const MIN_SAMPLES: usize = 8;
/// Coarse steps used to bracket the first crossing of the radius.
const BRACKET_STEPS: usize = 64;
/// Parameter cap for directions that never leave the body or domain.
const EUCLID_FAR: f64 = 1e6;
const MODEL_FAR: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayStatus {
    Reached,
    /// The radius is not reached along this direction (`F` stays below it).
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct BallSample {
    pub angle: f64,
    /// Plane coordinates; Poincaré-disk coordinates for hyperbolic scenes.
    pub point: [f64; 2],
    /// Ray parameter of `point` (Euclidean length or hyperbolic arc length).
    pub param: f64,
    pub status: RayStatus,
}

#[derive(Debug, Clone)]
pub struct Ball {
    pub center: [f64; 2],
    pub radius: f64,
    pub metric: Metric,
    pub samples: Vec<BallSample>,
}

/// Bisects `g(t) = radius` on `[0, hi]`, bracketing the first crossing on a
/// coarse grid first. `None` when `g` stays below the radius.
fn first_crossing<G: FnMut(f64) -> Result<f64>>(mut g: G, hi: f64, radius: f64) -> Result<Option<f64>> {
    let mut lo = 0.0;
    let mut up = None;
    for i in 1..=BRACKET_STEPS {
        let t = hi * i as f64 / BRACKET_STEPS as f64;
        if g(t)? >= radius {
            up = Some(t);
            break;
        }
        lo = t;
    }
    let Some(mut up) = up else { return Ok(None) };
    loop {
        let mid = 0.5 * (lo + up);
        if mid <= lo || mid >= up {
            return Ok(Some(mid));
        }
        let v = g(mid)?;
        if (v - radius).abs() <= BALL_TOL {
            return Ok(Some(mid));
        }
        if v >= radius {
            up = mid;
        } else {
            lo = mid;
        }
    }
}

pub fn compute_ball(scene: &Scene, center: &str, radius: f64, samples: usize, metric: Metric, tol: &Tolerances) -> Result<Ball> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(CliError::Argument("radius must be positive".into()));
    }
    if samples < MIN_SAMPLES {
        return Err(CliError::Argument(format!("at least {MIN_SAMPLES} samples are needed")));
    }
    let angles = (0..samples).map(|i| std::f64::consts::TAU * i as f64 / samples as f64);
    let mut out = Vec::with_capacity(samples);
    let c2;
    match &scene.geometry {
        Geometry::Euclidean { body, points } => {
            let c = points.get(center).ok_or_else(|| CliError::UnknownPoint(center.into()))?;
            if body.dim() != 2 {
                return Err(CliError::Argument("balls are traced in two dimensions only".into()));
            }
            // Metric errors (wrong space) surface before any tracing.
            euclid_value(body, c, c, metric, tol)?;
            c2 = [c[0], c[1]];
            for a in angles {
                let xi = dvector![a.cos(), a.sin()];
                let reach = body.radial_function(c, &xi)?;
                let hi = if reach.is_finite() { last_interior(reach, |t| Ok(body.contains_interior(&ray(c, &xi, t))?))? } else { EUCLID_FAR * body.scale() };
                let hit = first_crossing(|t| Ok(euclid_value(body, c, &ray(c, &xi, t), metric, tol)?.value), hi, radius)?;
                let (param, status) = hit.map_or((hi, RayStatus::Unbounded), |t| (t, RayStatus::Reached));
                let p = ray(c, &xi, param);
                out.push(BallSample { angle: a, point: [p[0], p[1]], param, status });
            }
        }
        Geometry::Hyperbolic { domain, points } => {
            let c = points.get(center).ok_or_else(|| CliError::UnknownPoint(center.into()))?;
            model_value(domain, c, c, metric, tol)?;
            c2 = c.to_disk();
            // Orthonormal frame at the center.
            let e1 = HTangent::projected(*c, Vector3::new(1.0, 0.0, 0.0)).normalized()?;
            let w = c.coords().cross(e1.vec());
            let e2 = HTangent::projected(*c, Vector3::new(w.x, w.y, -w.z)).normalized()?;
            for a in angles {
                let xi = HTangent::projected(*c, e1.vec() * a.cos() + e2.vec() * a.sin()).normalized()?;
                let hi = match first_hit(domain, &xi) {
                    Some((_, s)) => last_interior(s, |t| Ok(exp_map(&xi, t).is_ok_and(|p| domain_contains(domain, &p))))?,
                    None => MODEL_FAR,
                };
                let hit = first_crossing(|t| Ok(model_value(domain, c, &exp_map(&xi, t)?, metric, tol)?.value), hi, radius)?;
                let (param, status) = hit.map_or((hi, RayStatus::Unbounded), |t| (t, RayStatus::Reached));
                out.push(BallSample { angle: a, point: exp_map(&xi, param)?.to_disk(), param, status });
            }
        }
    }
    Ok(Ball { center: c2, radius, metric, samples: out })
}

fn ray(c: &Point, xi: &Point, t: f64) -> Point {
    c + xi * t
}

/// Largest parameter below `reach` whose point still passes the interior test.
fn last_interior<F: Fn(f64) -> Result<bool>>(reach: f64, inside: F) -> Result<f64> {
    let mut gap = 1e-9;
    while gap < 0.5 {
        let t = reach * (1.0 - gap);
        if inside(t)? {
            return Ok(t);
        }
        gap *= 4.0;
    }
    Ok(reach * 0.5)
}

impl Ball {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,angle,x,y,param,status\n");
        for (i, p) in self.samples.iter().enumerate() {
            let status = match p.status {
                RayStatus::Reached => "ok",
                RayStatus::Unbounded => "unbounded",
            };
            writeln!(s, "{i},{},{},{},{},{status}", p.angle, p.point[0], p.point[1], p.param).unwrap();
        }
        s
    }

    /// Emitted boundary polyline, in order.
    pub fn polyline(&self) -> Vec<[f64; 2]> {
        self.samples.iter().map(|p| p.point).collect()
    }

    pub fn all_reached(&self) -> bool {
        self.samples.iter().all(|p| p.status == RayStatus::Reached)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::parse_scene;

    fn disk() -> Scene {
        parse_scene(r#"{"space":"euclidean","body":{"type":"ball","center":[0,0],"radius":1},"points":{"o":[0,0]}}"#).unwrap()
    }

    #[test]
    fn funk_ball_on_the_disk_is_a_circle() {
        // F(0, y) = log(1 / (1 - |y|)), so radius log 2 is the circle |y| = 1/2.
        let b = compute_ball(&disk(), "o", std::f64::consts::LN_2, 16, Metric::F1, &Tolerances::default()).unwrap();
        for p in &b.samples {
            assert!((p.point[0].hypot(p.point[1]) - 0.5).abs() <= 1e-8, "{:?}", p.point);
        }
    }

    #[test]
    fn hilbert_ball_on_the_disk_is_a_circle() {
        let b = compute_ball(&disk(), "o", 0.5f64.atanh(), 16, Metric::Hilbert, &Tolerances::default()).unwrap();
        assert!(b.all_reached());
        for p in &b.samples {
            assert!((p.point[0].hypot(p.point[1]) - 0.5).abs() <= 1e-8);
        }
    }

    #[test]
    fn unbounded_directions_are_marked() {
        let s = parse_scene(r#"{"space":"euclidean","body":{"type":"halfspace_polytope","halfspaces":[{"normal":[1,0],"offset":1}]},"points":{"o":[0,0]}}"#).unwrap();
        let b = compute_ball(&s, "o", 1.0, 8, Metric::F1, &Tolerances::default()).unwrap();
        assert_eq!(b.samples[0].status, RayStatus::Reached);
        assert_eq!(b.samples[4].status, RayStatus::Unbounded);
        assert!(b.to_csv().contains("unbounded"));
    }

    #[test]
    fn too_few_samples() {
        assert!(compute_ball(&disk(), "o", 1.0, 7, Metric::F1, &Tolerances::default()).is_err());
    }
}
