//! Scene files: a body or geodesic domain plus named points, as JSON.
//!
//! ```json
//! {"space": "euclidean",
//!  "body": {"type": "halfspace_polytope",
//!           "halfspaces": [{"normal": [1, 0], "offset": 1}, ...]},
//!  "points": {"x": [0, 0], "y": [0.5, 0]}}
//! ```
//!
//! Body types are `halfspace_polytope` (optional `witness`), `ellipsoid`
//! (`center`, `radii`, optional `axes` given as a list of axis vectors),
//! `ball` (`center`, `radius`) and `lp_ball` (`center`, `radius`, `p`).
//!
//! Hyperbolic scenes use `"space": "hyperbolic2"` and a `domain` whose
//! `boundaries_disk` entries are either `{"ideal_endpoints": [a, b]}` (the
//! inside is on the right walking from `a` to `b`) or `{"normal": [n1, n2, n0]}`
//! (inside where `⟨p, n⟩ < 0`). Hyperbolic points are Poincaré-disk coordinates.

use std::collections::BTreeMap;

use funkspace_core::euclid_convex::{ConvexBody, Hyperplane, Point};
use funkspace_core::hyperbolic_core::{domain_contains, GeodesicDomain, HGeodesicLine, HPoint};
use nalgebra::{DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Normals farther than this from unit length are renormalized with a warning.
pub const NORMAL_WARN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Euclidean,
    Hyperbolic2,
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::Euclidean => "euclidean",
            Space::Hyperbolic2 => "hyperbolic2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub space: Space,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<BodySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    #[serde(default)]
    pub points: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    HalfspacePolytope {
        halfspaces: Vec<HalfspaceSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<Vec<f64>>,
    },
    Ellipsoid {
        center: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        axes: Option<Vec<Vec<f64>>>,
        radii: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    LpBall {
        center: Vec<f64>,
        radius: f64,
        p: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub boundaries_disk: Vec<BoundarySpec>,
    /// Disk coordinates of an interior point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundarySpec {
    Endpoints { ideal_endpoints: [[f64; 2]; 2] },
    Normal { normal: [f64; 3] },
}

/// The validated geometry of a scene.
#[derive(Debug, Clone)]
pub enum Geometry {
    Euclidean { body: ConvexBody, points: BTreeMap<String, Point> },
    Hyperbolic { domain: GeodesicDomain, points: BTreeMap<String, HPoint> },
}

#[derive(Debug, Clone)]
pub struct Scene {
    /// The file as parsed, with normals renormalized.
    pub file: SceneFile,
    pub geometry: Geometry,
    pub warnings: Vec<String>,
}

impl Scene {
    pub fn space(&self) -> Space {
        self.file.space
    }
}

pub fn parse_scene(text: &str) -> Result<Scene> {
    let file: SceneFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    build_scene(file)
}

/// Validates a scene description.
pub fn build_scene(mut file: SceneFile) -> Result<Scene> {
    let mut warnings = Vec::new();
    let geometry = match file.space {
        Space::Euclidean => {
            if file.domain.is_some() {
                return Err(invalid("a euclidean scene takes a `body`, not a `domain`"));
            }
            let spec = file.body.as_mut().ok_or_else(|| invalid("missing `body`"))?;
            let points = euclid_points(&file.points)?;
            let body = build_body(spec, &points, &mut warnings)?;
            for (name, p) in &points {
                if p.len() != body.dim() {
                    return Err(invalid(format!("point `{name}` has {} coordinates, the body has dimension {}", p.len(), body.dim())));
                }
                if !body.contains_interior(p)? {
                    return Err(invalid(format!("point `{name}` is not interior")));
                }
            }
            Geometry::Euclidean { body, points }
        }
        Space::Hyperbolic2 => {
            if file.body.is_some() {
                return Err(invalid("a hyperbolic2 scene takes a `domain`, not a `body`"));
            }
            let spec = file.domain.as_mut().ok_or_else(|| invalid("missing `domain`"))?;
            let points = disk_points(&file.points)?;
            let domain = build_domain(spec, &points, &mut warnings)?;
            for (name, p) in &points {
                if !domain_contains(&domain, p) {
                    return Err(invalid(format!("point `{name}` is not inside the domain")));
                }
            }
            Geometry::Hyperbolic { domain, points }
        }
    };
    Ok(Scene { file, geometry, warnings })
}

/// Pretty JSON that parses back to the same scene.
pub fn serialize_scene(scene: &Scene) -> String {
    serde_json::to_string_pretty(&scene.file).expect("scene files serialize")
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn finite(v: &[f64], what: &str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(invalid(format!("{what} has non-finite coordinates")))
    }
}

fn euclid_points(raw: &BTreeMap<String, Vec<f64>>) -> Result<BTreeMap<String, Point>> {
    raw.iter()
        .map(|(k, v)| {
            finite(v, &format!("point `{k}`"))?;
            Ok((k.clone(), DVector::from_column_slice(v)))
        })
        .collect()
}

fn disk_points(raw: &BTreeMap<String, Vec<f64>>) -> Result<BTreeMap<String, HPoint>> {
    raw.iter()
        .map(|(k, v)| {
            finite(v, &format!("point `{k}`"))?;
            if v.len() != 2 {
                return Err(invalid(format!("point `{k}` needs two disk coordinates")));
            }
            let p = HPoint::from_disk(v[0], v[1]).map_err(|_| invalid(format!("point `{k}` has |u| >= 1")))?;
            Ok((k.clone(), p))
        })
        .collect()
}

/// Rescales `v` to unit length under `norm2`, warning when it was far off.
fn renormalize(v: &mut [f64], norm2: f64, what: String, warnings: &mut Vec<String>) -> Result<()> {
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return Err(invalid(format!("{what} is degenerate")));
    }
    let n = norm2.sqrt();
    if (n - 1.0).abs() > NORMAL_WARN_TOL {
        warnings.push(format!("{what} had length {n}; renormalized"));
    }
    if n != 1.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    Ok(())
}

fn build_body(spec: &mut BodySpec, points: &BTreeMap<String, Point>, warnings: &mut Vec<String>) -> Result<ConvexBody> {
    let body = match spec {
        BodySpec::HalfspacePolytope { halfspaces, witness } => {
            let dim = halfspaces.first().ok_or_else(|| invalid("polytope needs at least one halfspace"))?.normal.len();
            let mut planes = Vec::with_capacity(halfspaces.len());
            for (i, h) in halfspaces.iter_mut().enumerate() {
                if h.normal.len() != dim {
                    return Err(invalid(format!("halfspace {i} has dimension {}, expected {dim}", h.normal.len())));
                }
                finite(&h.normal, &format!("halfspace {i}"))?;
                if !h.offset.is_finite() {
                    return Err(invalid(format!("halfspace {i} has a non-finite offset")));
                }
                let n2: f64 = h.normal.iter().map(|x| x * x).sum();
                let n = n2.sqrt();
                renormalize(&mut h.normal, n2, format!("normal of halfspace {i}"), warnings)?;
                if n != 1.0 {
                    h.offset /= n;
                }
                planes.push(Hyperplane::from_slice(&h.normal, h.offset)?);
            }
            polytope_with_witness(planes, dim, witness.as_deref(), points)?
        }
        BodySpec::Ellipsoid { center, axes, radii } => {
            let d = center.len();
            finite(center, "ellipsoid center")?;
            if radii.len() != d {
                return Err(invalid("ellipsoid needs one radius per dimension"));
            }
            let axes = match axes {
                None => DMatrix::identity(d, d),
                Some(cols) => {
                    if cols.len() != d || cols.iter().any(|c| c.len() != d) {
                        return Err(invalid("ellipsoid axes must be a square matrix"));
                    }
                    DMatrix::from_fn(d, d, |r, c| cols[c][r])
                }
            };
            ConvexBody::ellipsoid(DVector::from_column_slice(center), axes, DVector::from_column_slice(radii))
                .map_err(|e| invalid(e.to_string()))?
        }
        BodySpec::Ball { center, radius } => {
            finite(center, "ball center")?;
            ConvexBody::ball(DVector::from_column_slice(center), *radius).map_err(|e| invalid(e.to_string()))?
        }
        BodySpec::LpBall { center, radius, p } => {
            finite(center, "lp ball center")?;
            ConvexBody::lp_ball(DVector::from_column_slice(center), *radius, *p).map_err(|e| invalid(e.to_string()))?
        }
    };
    Ok(body)
}

/// Witness rule: the explicit witness, else the first named point (by name)
/// strictly inside every halfspace, else the centroid of the vertices.
fn polytope_with_witness(
    planes: Vec<Hyperplane>,
    dim: usize,
    witness: Option<&[f64]>,
    points: &BTreeMap<String, Point>,
) -> Result<ConvexBody> {
    if let Some(w) = witness {
        if w.len() != dim {
            return Err(invalid("witness dimension does not match the halfspaces"));
        }
        return ConvexBody::polytope(planes, DVector::from_column_slice(w)).map_err(|e| invalid(e.to_string()));
    }
    for p in points.values().filter(|p| p.len() == dim) {
        if let Ok(body) = ConvexBody::polytope(planes.clone(), p.clone()) {
            return Ok(body);
        }
    }
    ConvexBody::polytope_from_vertices(planes, dim).map_err(|e| invalid(e.to_string()))
}

fn build_domain(spec: &mut DomainSpec, points: &BTreeMap<String, HPoint>, warnings: &mut Vec<String>) -> Result<GeodesicDomain> {
    if spec.boundaries_disk.is_empty() {
        return Err(invalid("domain needs at least one boundary geodesic"));
    }
    let mut lines = Vec::with_capacity(spec.boundaries_disk.len());
    for (i, b) in spec.boundaries_disk.iter_mut().enumerate() {
        let line = match b {
            BoundarySpec::Endpoints { ideal_endpoints: [a, e] } => {
                finite(&[a[0], a[1], e[0], e[1]], &format!("boundary {i}"))?;
                HGeodesicLine::from_ideal_endpoints(*a, *e).map_err(|err| invalid(format!("boundary {i}: {err}")))?
            }
            BoundarySpec::Normal { normal } => {
                finite(normal, &format!("boundary {i}"))?;
                let q = normal[0] * normal[0] + normal[1] * normal[1] - normal[2] * normal[2];
                renormalize(normal, q, format!("normal of boundary {i}"), warnings)?;
                HGeodesicLine::from_normal(Vector3::new(normal[0], normal[1], normal[2]))
                    .map_err(|err| invalid(format!("boundary {i}: {err}")))?
            }
        };
        lines.push(line);
    }
    if let Some([u1, u2]) = spec.witness {
        let w = HPoint::from_disk(u1, u2).map_err(|_| invalid("domain witness has |u| >= 1"))?;
        return GeodesicDomain::new(lines, w).map_err(|e| invalid(e.to_string()));
    }
    // Same rule as polytopes, with the disk center as the last resort.
    points
        .values()
        .copied()
        .chain(std::iter::once(HPoint::origin()))
        .find_map(|w| GeodesicDomain::new(lines.clone(), w).ok())
        .ok_or_else(|| invalid("domain is empty or needs an explicit `witness`"))
}
