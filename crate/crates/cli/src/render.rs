//! Deterministic SVG figures of scenes, balls and geodesic segments.

use std::fmt::Write as _;

use funkspace_core::euclid_convex::{BodyShape, ConvexBody, Hyperplane, Point};
use funkspace_core::hyperbolic_core::{exp_map, log_map, DiskCurve, GeodesicDomain};
use nalgebra::dvector;

use crate::ball::{compute_ball, Ball};
use crate::error::{CliError, Result};
use crate::metrics::{Metric, Tolerances};
use crate::scene::{Geometry, Scene, Space};

const SIZE: f64 = 512.0;
const PAD: f64 = 24.0;
/// Directions used to trace curved outlines.
const OUTLINE_SAMPLES: usize = 256;

/// `center:radius[:metric]`.
#[derive(Debug, Clone)]
pub struct BallRequest {
    pub center: String,
    pub radius: f64,
    pub metric: Option<Metric>,
}

impl std::str::FromStr for BallRequest {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::Argument(format!("expected center:radius[:metric], got `{s}`"));
        if parts.len() < 2 || parts.len() > 3 {
            return Err(bad());
        }
        let radius = parts[1].parse().map_err(|_| bad())?;
        let metric = parts.get(2).map(|m| Metric::parse(m)).transpose()?;
        Ok(Self { center: parts[0].into(), radius, metric })
    }
}

#[derive(Debug, Clone, Default)]
pub struct RenderOptions {
    pub balls: Vec<BallRequest>,
    /// Named point pairs joined by their geodesic.
    pub segments: Vec<(String, String)>,
    pub ball_samples: usize,
}

/// Maps plane coordinates to pixels with y pointing up.
struct View {
    min: [f64; 2],
    k: f64,
}

impl View {
    fn fit(pts: &[[f64; 2]]) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in pts {
            for i in 0..2 {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        let mid = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
        Self { min: [mid[0] - 0.5 * span, mid[1] - 0.5 * span], k: (SIZE - 2.0 * PAD) / span }
    }

    fn px(&self, p: [f64; 2]) -> (f64, f64) {
        (PAD + (p[0] - self.min[0]) * self.k, SIZE - PAD - (p[1] - self.min[1]) * self.k)
    }

    fn path(&self, pts: &[[f64; 2]], closed: bool) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.px(*p);
            write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" }).unwrap();
        }
        if closed {
            d.push('Z');
        }
        d.trim_end().to_string()
    }
}

/// Boundary of a planar body, clipped to `clip` when unbounded.
fn body_outline(body: &ConvexBody, clip: f64) -> Result<Vec<[f64; 2]>> {
    match body.shape() {
        BodyShape::HalfspacePolytope(hs) => {
            let w = body.witness();
            let mut planes = hs.to_vec();
            if !body.is_bounded() {
                for (a, b) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
                    let n = dvector![a, b];
                    let c = n.dot(w) + clip;
                    planes.push(Hyperplane::new(n, c)?);
                }
            }
            let clipped = ConvexBody::polytope(planes, w.clone())?;
            let vs = clipped.polytope_vertices()?;
            let c = vs.iter().fold(Point::zeros(2), |acc, v| acc + v) / vs.len() as f64;
            let mut pts: Vec<(f64, [f64; 2])> = vs.iter().map(|v| ((v[1] - c[1]).atan2(v[0] - c[0]), [v[0], v[1]])).collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            Ok(pts.into_iter().map(|p| p.1).collect())
        }
        _ => {
            let w = body.witness();
            (0..OUTLINE_SAMPLES)
                .map(|i| {
                    let a = std::f64::consts::TAU * i as f64 / OUTLINE_SAMPLES as f64;
                    let u = dvector![a.cos(), a.sin()];
                    let r = body.radial_function(w, &u)?.min(clip);
                    Ok([w[0] + r * u[0], w[1] + r * u[1]])
                })
                .collect()
        }
    }
}

fn header(out: &mut String) {
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
}

fn point_marker(out: &mut String, view: &View, name: &str, p: [f64; 2]) {
    let (x, y) = view.px(p);
    writeln!(out, r##"<circle class="point" cx="{x:.3}" cy="{y:.3}" r="3.5" fill="#c0392b"/>"##).unwrap();
    writeln!(out, r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12">{}</text>"#, x + 5.0, y - 5.0, escape(name)).unwrap();
}

fn ball_polyline(out: &mut String, view: &View, ball: &Ball) {
    let pts = ball.polyline();
    writeln!(
        out,
        r##"<path class="ball" d="{}" fill="none" stroke="#2471a3" stroke-width="1.5"/>"##,
        view.path(&pts, ball.all_reached())
    )
    .unwrap();
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Full figure for a scene.
pub fn render_scene(scene: &Scene, opts: &RenderOptions, tol: &Tolerances) -> Result<String> {
    let samples = if opts.ball_samples == 0 { 128 } else { opts.ball_samples };
    let balls = opts
        .balls
        .iter()
        .map(|b| {
            let metric = b.metric.unwrap_or(match scene.space() {
                Space::Euclidean => Metric::F1,
                Space::Hyperbolic2 => Metric::WpF2,
            });
            compute_ball(scene, &b.center, b.radius, samples, metric, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    match &scene.geometry {
        Geometry::Euclidean { body, points } => {
            if body.dim() != 2 {
                return Err(CliError::Argument("only two-dimensional scenes can be rendered".into()));
            }
            let named: Vec<(&String, [f64; 2])> = points.iter().map(|(k, p)| (k, [p[0], p[1]])).collect();
            let w = body.witness();
            let reach = named.iter().map(|(_, p)| (p[0] - w[0]).abs().max((p[1] - w[1]).abs())).fold(1.0, f64::max);
            let outline = body_outline(body, 2.0 * reach * body.scale().max(1.0))?;
            let mut extent = outline.clone();
            extent.extend(named.iter().map(|p| p.1));
            for b in &balls {
                extent.extend(b.polyline());
            }
            let view = View::fit(&extent);
            let mut out = String::new();
            header(&mut out);
            writeln!(out, r##"<path class="body" d="{}" fill="#eaf2f8" stroke="#1b2631" stroke-width="1.5"/>"##, view.path(&outline, true)).unwrap();
            for (a, b) in &opts.segments {
                let (pa, pb) = (points.get(a), points.get(b));
                let (Some(pa), Some(pb)) = (pa, pb) else {
                    return Err(CliError::UnknownPoint(if pa.is_none() { a.clone() } else { b.clone() }));
                };
                writeln!(out, r##"<path class="geodesic" d="{}" stroke="#7d3c98" fill="none"/>"##, view.path(&[[pa[0], pa[1]], [pb[0], pb[1]]], false)).unwrap();
            }
            for b in &balls {
                ball_polyline(&mut out, &view, b);
            }
            for (name, p) in named {
                point_marker(&mut out, &view, name, p);
            }
            out.push_str("</svg>\n");
            Ok(out)
        }
        Geometry::Hyperbolic { domain, points } => {
            let view = View::fit(&[[-1.02, -1.02], [1.02, 1.02]]);
            let mut out = String::new();
            header(&mut out);
            let (cx, cy) = view.px([0.0, 0.0]);
            writeln!(out, r##"<circle class="disk" cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="#eaf2f8" stroke="#1b2631" stroke-width="1.5"/>"##, view.k).unwrap();
            boundary_arcs(&mut out, &view, domain);
            for (a, b) in &opts.segments {
                let (pa, pb) = (points.get(a), points.get(b));
                let (Some(pa), Some(pb)) = (pa, pb) else {
                    return Err(CliError::UnknownPoint(if pa.is_none() { a.clone() } else { b.clone() }));
                };
                let mut pts = vec![pa.to_disk()];
                if let Ok((t, d)) = log_map(pa, pb) {
                    pts = (0..=64).map(|i| exp_map(&t, d * i as f64 / 64.0).map(|p| p.to_disk())).collect::<Result<_, _>>()?;
                }
                writeln!(out, r##"<path class="geodesic" d="{}" stroke="#7d3c98" fill="none"/>"##, view.path(&pts, false)).unwrap();
            }
            for b in &balls {
                ball_polyline(&mut out, &view, b);
            }
            for (name, p) in points {
                point_marker(&mut out, &view, name, p.to_disk());
            }
            out.push_str("</svg>\n");
            Ok(out)
        }
    }
}

/// Each boundary geodesic as a circular arc (or diameter) between its ideal endpoints.
fn boundary_arcs(out: &mut String, view: &View, domain: &GeodesicDomain) {
    for line in domain.boundaries() {
        let (a, b) = line.ideal_endpoints();
        let (ax, ay) = view.px(a);
        let (bx, by) = view.px(b);
        let d = match line.disk_curve() {
            DiskCurve::Diameter { .. } => format!("M{ax:.3},{ay:.3} L{bx:.3},{by:.3}"),
            DiskCurve::Circle { center, radius } => {
                let (ccx, ccy) = view.px(center);
                // The inner arc is the minor one; pick the sweep that turns around the center from a to b.
                let cross = (ax - ccx) * (by - ccy) - (ay - ccy) * (bx - ccx);
                let sweep = u8::from(cross > 0.0);
                let r = radius * view.k;
                format!("M{ax:.3},{ay:.3} A{r:.3},{r:.3} 0 0 {sweep} {bx:.3},{by:.3}")
            }
        };
        writeln!(out, r##"<path class="boundary" d="{d}" fill="none" stroke="#b03a2e" stroke-width="2"/>"##).unwrap();
    }
}
