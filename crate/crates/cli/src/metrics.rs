//! Metric dispatch for `dist` and `ball`.

use std::collections::BTreeMap;

use clap::ValueEnum;
use funkspace_core::euclid_convex::{ConvexBody, Point, INTERIOR_MARGIN};
use funkspace_core::funk_euclid::{
    cross_ratio_log, funk_f1, funk_f2_with, funk_f3, hilbert, Attainment, F2Options, F3Options, FunkValue, PATH_QUAD_TOL,
};
use funkspace_core::funk_model::{
    phi1, wp_f1_estimate, wp_f2, wp_f3_estimate, wp_hilbert, ModelFunkValue, ModelPathOptions, HIT_TIE_TOL,
};
use funkspace_core::hyperbolic_core::{GeodesicDomain, HPoint, INTERIOR_EPS};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::scene::{Geometry, Scene, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    F1,
    F2,
    F3,
    Hilbert,
    CrossRatio,
    Phi1,
    WpF1,
    WpF2,
    WpF3,
    WpHilbert,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::F1 => "f1",
            Metric::F2 => "f2",
            Metric::F3 => "f3",
            Metric::Hilbert => "hilbert",
            Metric::CrossRatio => "cross-ratio",
            Metric::Phi1 => "phi1",
            Metric::WpF1 => "wp-f1",
            Metric::WpF2 => "wp-f2",
            Metric::WpF3 => "wp-f3",
            Metric::WpHilbert => "wp-hilbert",
        }
    }

    pub fn space(self) -> Space {
        match self {
            Metric::F1 | Metric::F2 | Metric::F3 | Metric::Hilbert | Metric::CrossRatio => Space::Euclidean,
            _ => Space::Hyperbolic2,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        <Metric as ValueEnum>::from_str(s, true).map_err(|_| CliError::Argument(format!("unknown metric `{s}`")))
    }

    fn check_space(self, space: Space) -> Result<()> {
        if self.space() == space {
            Ok(())
        } else {
            Err(CliError::MetricSpaceMismatch { metric: self.name().into(), space: space.name().into() })
        }
    }
}

/// Numerical settings for the optimized metrics.
#[derive(Debug, Clone, Copy, Default)]
pub struct Tolerances {
    pub f2: F2Options,
    pub f3: F3Options,
    pub model_path: ModelPathOptions,
}

impl Tolerances {
    /// The settings relevant to `metric`, for reports.
    pub fn info(&self, metric: Metric, body: Option<&ConvexBody>) -> BTreeMap<&'static str, Value> {
        let mut m = BTreeMap::new();
        match metric.space() {
            Space::Euclidean => {
                m.insert("interior_margin", json!(INTERIOR_MARGIN));
            }
            Space::Hyperbolic2 => {
                m.insert("interior_eps", json!(INTERIOR_EPS));
                m.insert("hit_tie_tol", json!(HIT_TIE_TOL));
            }
        }
        match metric {
            Metric::F2 if !body.is_some_and(ConvexBody::is_polytope) => {
                m.insert("f2_random_starts", json!(self.f2.random_starts));
                m.insert("f2_grad_tol", json!(self.f2.grad_tol));
                m.insert("f2_max_iters", json!(self.f2.max_iters));
                m.insert("f2_seed", json!(self.f2.seed));
            }
            Metric::F3 => {
                m.insert("f3_knots", json!(self.f3.knots));
                m.insert("f3_restarts", json!(self.f3.restarts));
                m.insert("f3_tol", json!(self.f3.tol));
                m.insert("f3_seed", json!(self.f3.seed));
                m.insert("path_quad_tol", json!(PATH_QUAD_TOL));
            }
            Metric::WpF1 | Metric::WpF3 => {
                m.insert("path_knots", json!(self.model_path.knots));
                m.insert("path_restarts", json!(self.model_path.restarts));
                m.insert("path_tol", json!(self.model_path.tol));
                m.insert("path_seed", json!(self.model_path.seed));
            }
            _ => {}
        }
        m
    }
}

/// One `dist` result.
#[derive(Debug, Clone, Serialize)]
pub struct DistRecord {
    pub metric: &'static str,
    pub from: String,
    pub to: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw: Option<f64>,
    pub attained_at: Value,
    pub formulation: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonneg_violated: Option<bool>,
    pub tolerance_info: BTreeMap<&'static str, Value>,
}

fn coords(p: &Point) -> Vec<f64> {
    p.iter().copied().collect()
}

fn attainment_json(a: &Option<Attainment>) -> Value {
    match a {
        None => Value::Null,
        Some(Attainment::Hyperplane { facet: Some(i), .. }) => json!(i),
        Some(Attainment::Hyperplane { plane, facet: None }) => {
            json!({"normal": coords(plane.normal()), "offset": plane.offset()})
        }
        Some(Attainment::Hit(hit)) => json!({"exit_point": coords(&hit.point), "facets": hit.facets}),
    }
}

pub fn euclid_value(body: &ConvexBody, x: &Point, y: &Point, metric: Metric, tol: &Tolerances) -> Result<FunkValue> {
    metric.check_space(Space::Euclidean)?;
    Ok(match metric {
        Metric::F1 => funk_f1(body, x, y)?,
        Metric::F2 => funk_f2_with(body, x, y, &tol.f2)?,
        Metric::F3 => funk_f3(body, x, y, &tol.f3)?,
        Metric::Hilbert => hilbert(body, x, y)?,
        Metric::CrossRatio => {
            let v = cross_ratio_log(body, x, y)?;
            FunkValue { value: v, raw: v, formulation: funkspace_core::funk_euclid::Formulation::Hilbert, attained_at: None }
        }
        _ => unreachable!("checked above"),
    })
}

pub fn model_value(domain: &GeodesicDomain, x: &HPoint, y: &HPoint, metric: Metric, tol: &Tolerances) -> Result<ModelFunkValue> {
    metric.check_space(Space::Hyperbolic2)?;
    Ok(match metric {
        Metric::Phi1 => phi1(domain, x, y)?,
        Metric::WpF1 => wp_f1_estimate(domain, x, y, &tol.model_path)?,
        Metric::WpF2 => wp_f2(domain, x, y)?,
        Metric::WpF3 => wp_f3_estimate(domain, x, y, &tol.model_path)?,
        Metric::WpHilbert => wp_hilbert(domain, x, y)?,
        _ => unreachable!("checked above"),
    })
}

fn lookup<'a, P>(points: &'a BTreeMap<String, P>, name: &str) -> Result<&'a P> {
    points.get(name).ok_or_else(|| CliError::UnknownPoint(name.into()))
}

/// Evaluates `metric` between two named points.
pub fn dist(scene: &Scene, from: &str, to: &str, metric: Metric, tol: &Tolerances) -> Result<DistRecord> {
    metric.check_space(scene.space())?;
    let mut rec = DistRecord {
        metric: metric.name(),
        from: from.into(),
        to: to.into(),
        value: 0.0,
        raw: None,
        attained_at: Value::Null,
        formulation: "",
        nonneg_violated: None,
        tolerance_info: BTreeMap::new(),
    };
    match &scene.geometry {
        Geometry::Euclidean { body, points } => {
            let (x, y) = (lookup(points, from)?, lookup(points, to)?);
            let v = euclid_value(body, x, y, metric, tol)?;
            rec.value = v.value;
            if metric == Metric::F2 {
                rec.raw = Some(v.raw);
            }
            rec.attained_at = attainment_json(&v.attained_at);
            rec.formulation = match metric {
                Metric::F1 => "ray_exit",
                Metric::F2 => "supporting_hyperplane_sup",
                Metric::F3 => "finsler_path_infimum",
                Metric::Hilbert => "symmetrized_funk",
                _ => "log_cross_ratio",
            };
            rec.tolerance_info = tol.info(metric, Some(body));
        }
        Geometry::Hyperbolic { domain, points } => {
            let (x, y) = (lookup(points, from)?, lookup(points, to)?);
            let v = model_value(domain, x, y, metric, tol)?;
            rec.value = v.value;
            if metric == Metric::WpF2 {
                rec.raw = Some(v.raw);
                rec.nonneg_violated = Some(v.nonneg_violated);
            }
            rec.attained_at = v.attained_at.map_or(Value::Null, |i| json!(i));
            rec.formulation = match metric {
                Metric::Phi1 => "first_hit_ratio",
                Metric::WpF1 => "path_infimum_hat",
                Metric::WpF2 => "boundary_distance_ratio_max",
                Metric::WpF3 => "path_infimum_tilde",
                _ => "symmetrized_f2",
            };
            rec.tolerance_info = tol.info(metric, None);
        }
    }
    Ok(rec)
}
