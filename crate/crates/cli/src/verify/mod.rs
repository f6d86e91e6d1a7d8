//! Seeded property suites and their JSON reports.
//!
//! Every property runs a number of trials, each with its own ChaCha8 stream
//! derived from `(seed, property name, trial index)`. Trials run in parallel
//! and are folded in index order, so a report depends only on its inputs.

mod euclid;
mod hyperbolic;

use std::collections::BTreeMap;

use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::metrics::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Euclid,
    Hyperbolic,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Euclid => "euclid",
            Suite::Hyperbolic => "hyperbolic",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub tol: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyKind {
    /// Every trial must keep the checked quantity at or below the tolerance.
    Bound,
    /// Some trial must exceed the threshold; the first one found is the witness.
    Witness,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub kind: PropertyKind,
    pub trials: usize,
    /// Trials that satisfied the bound (or exceeded the witness threshold).
    pub passed: usize,
    pub failed: usize,
    pub tolerance: f64,
    /// Largest checked quantity over all trials.
    pub worst: f64,
    pub worst_trial: Option<usize>,
    pub ok: bool,
    /// Inputs of the first failing trial, or of the witness found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    /// Seconds spent; printed but kept out of the report so reruns compare equal.
    #[serde(skip)]
    pub elapsed: f64,
}

/// Reported, never asserted.
#[derive(Debug, Clone, Serialize)]
pub struct Observation {
    pub name: String,
    pub values: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub trials: usize,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub tolerances: BTreeMap<String, Value>,
    pub properties: Vec<PropertyReport>,
    pub observations: Vec<Observation>,
    pub all_passed: bool,
}

impl SuiteReport {
    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn observation(&self, name: &str) -> Option<&Observation> {
        self.observations.iter().find(|o| o.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// What one trial measured. `inputs` is only built when it is kept.
pub struct Trial {
    pub quantity: f64,
    pub inputs: Box<dyn FnOnce() -> Value + Send>,
}

impl Trial {
    pub fn new(quantity: f64, inputs: impl FnOnce() -> Value + Send + 'static) -> Self {
        Self { quantity, inputs: Box::new(inputs) }
    }
}

pub type TrialResult = funkspace_core::Result<Trial>;

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The RNG for one trial of one property.
pub fn trial_rng(seed: u64, property: &str, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(splitmix(seed ^ fnv1a(property)) ^ trial as u64))
}

fn run<F>(name: &str, seed: u64, trials: usize, f: F) -> Vec<(usize, TrialResult)>
where
    F: Fn(&mut ChaCha8Rng, usize) -> TrialResult + Sync,
{
    (0..trials).into_par_iter().map(|i| (i, f(&mut trial_rng(seed, name, i), i))).collect()
}

fn error_inputs(e: &funkspace_core::Error) -> Value {
    serde_json::json!({ "error": e.to_string() })
}

/// Runs a property whose quantity must stay at or below `tol` in every trial.
/// Trials that error count as failures.
pub fn bound<F>(name: &str, seed: u64, trials: usize, tol: f64, f: F) -> PropertyReport
where
    F: Fn(&mut ChaCha8Rng, usize) -> TrialResult + Sync,
{
    let start = std::time::Instant::now();
    let mut rep = bound_from(name, tol, run(name, seed, trials, f));
    rep.elapsed = start.elapsed().as_secs_f64();
    rep
}

/// [`bound`] over trial results computed elsewhere, in trial order.
pub fn bound_from(name: &str, tol: f64, results: Vec<(usize, TrialResult)>) -> PropertyReport {
    let trials = results.len();
    let mut rep = PropertyReport {
        name: name.into(),
        kind: PropertyKind::Bound,
        trials,
        passed: 0,
        failed: 0,
        tolerance: tol,
        worst: f64::NEG_INFINITY,
        worst_trial: None,
        ok: true,
        witness: None,
        elapsed: 0.0,
    };
    for (i, r) in results {
        match r {
            Ok(t) => {
                if t.quantity > rep.worst || rep.worst_trial.is_none() {
                    rep.worst = t.quantity;
                    rep.worst_trial = Some(i);
                }
                if t.quantity <= tol {
                    rep.passed += 1;
                } else {
                    rep.failed += 1;
                    if rep.witness.is_none() {
                        rep.witness = Some(serde_json::json!({ "trial": i, "quantity": t.quantity, "inputs": (t.inputs)() }));
                    }
                }
            }
            Err(e) => {
                rep.failed += 1;
                if rep.witness.is_none() {
                    rep.witness = Some(serde_json::json!({ "trial": i, "inputs": error_inputs(&e) }));
                }
            }
        }
    }
    rep.ok = rep.failed == 0;
    rep
}

/// Searches `trials` candidates for one whose quantity exceeds `threshold`.
pub fn witness<F>(name: &str, seed: u64, trials: usize, threshold: f64, f: F) -> PropertyReport
where
    F: Fn(&mut ChaCha8Rng, usize) -> TrialResult + Sync,
{
    let start = std::time::Instant::now();
    let mut rep = PropertyReport {
        name: name.into(),
        kind: PropertyKind::Witness,
        trials,
        passed: 0,
        failed: 0,
        tolerance: threshold,
        worst: f64::NEG_INFINITY,
        worst_trial: None,
        ok: false,
        witness: None,
        elapsed: 0.0,
    };
    for (i, r) in run(name, seed, trials, f) {
        let Ok(t) = r else {
            rep.failed += 1;
            continue;
        };
        if t.quantity > rep.worst || rep.worst_trial.is_none() {
            rep.worst = t.quantity;
            rep.worst_trial = Some(i);
        }
        if t.quantity > threshold {
            rep.passed += 1;
            if rep.witness.is_none() {
                rep.witness = Some(serde_json::json!({ "trial": i, "quantity": t.quantity, "inputs": (t.inputs)() }));
            }
        } else {
            rep.failed += 1;
        }
    }
    rep.ok = rep.passed > 0;
    rep.elapsed = start.elapsed().as_secs_f64();
    rep
}

/// Collects per-trial measurements for observations, in trial order.
pub fn collect<T, F>(name: &str, seed: u64, trials: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> Option<T> + Sync,
{
    let out: Vec<Option<T>> = (0..trials).into_par_iter().map(|i| f(&mut trial_rng(seed, name, i), i)).collect();
    out.into_iter().flatten().collect()
}

/// `{count, min, mean, max}` of a sample, in order.
pub fn stats(xs: &[f64]) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert("count".into(), Value::from(xs.len()));
    if !xs.is_empty() {
        let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        m.insert("min".into(), Value::from(min));
        m.insert("mean".into(), Value::from(mean));
        m.insert("max".into(), Value::from(max));
    }
    m
}

pub fn coords<'a, I: IntoIterator<Item = &'a f64>>(v: I) -> Value {
    Value::from(v.into_iter().copied().collect::<Vec<f64>>())
}

/// Runs the requested suite.
pub fn run_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut properties = Vec::new();
    let mut observations = Vec::new();
    let mut tolerances = BTreeMap::new();
    if matches!(opts.suite, Suite::Euclid | Suite::All) {
        euclid::run(opts, &mut properties, &mut observations, &mut tolerances);
    }
    if matches!(opts.suite, Suite::Hyperbolic | Suite::All) {
        hyperbolic::run(opts, &mut properties, &mut observations, &mut tolerances);
    }
    let all_passed = properties.iter().all(|p| p.ok);
    SuiteReport {
        suite: opts.suite.name(),
        trials: opts.trials,
        seed: opts.seed,
        dims: opts.dims.clone(),
        tolerances,
        properties,
        observations,
        all_passed,
    }
}
