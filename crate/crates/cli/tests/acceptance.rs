//! Acceptance criteria 1-11, run at full scale with the default seed.
//!
//! Prints one PASS/FAIL line per criterion and exits nonzero if any fails.
//! Each check also confirms the trial count and that the suite's tolerance is
//! no looser than the criterion's, so the report cannot pass a weaker test.

use std::process::{Command, ExitCode};

use funkspace::metrics::Tolerances;
use funkspace::verify::{run_suite, PropertyKind, Suite, SuiteReport, VerifyOptions};
use funkspace::DEFAULT_SEED;

const TRIALS: usize = 1000;

struct Check<'a> {
    rep: &'a SuiteReport,
    problems: Vec<String>,
}

impl<'a> Check<'a> {
    fn new(rep: &'a SuiteReport) -> Self {
        Self { rep, problems: Vec::new() }
    }

    /// A bound property with at least `min_trials` trials and tolerance at most `tol`.
    fn bound(&mut self, name: &str, min_trials: usize, tol: f64) -> &mut Self {
        self.property(name, PropertyKind::Bound, min_trials, tol)
    }

    /// A witness search that found a witness above a threshold of at least `threshold`.
    fn witness(&mut self, name: &str, threshold: f64) -> &mut Self {
        let Some(p) = self.rep.property(name) else {
            self.problems.push(format!("{name}: missing"));
            return self;
        };
        if p.kind != PropertyKind::Witness || p.tolerance < threshold {
            self.problems.push(format!("{name}: threshold {:e} below {threshold:e}", p.tolerance));
        }
        if !p.ok || p.witness.is_none() {
            self.problems.push(format!("{name}: no witness in {} candidates (best {:e})", p.trials, p.worst));
        }
        self
    }

    fn property(&mut self, name: &str, kind: PropertyKind, min_trials: usize, tol: f64) -> &mut Self {
        let Some(p) = self.rep.property(name) else {
            self.problems.push(format!("{name}: missing"));
            return self;
        };
        if p.kind != kind {
            self.problems.push(format!("{name}: wrong kind"));
        }
        if p.trials < min_trials {
            self.problems.push(format!("{name}: {} trials, need {min_trials}", p.trials));
        }
        if p.tolerance > tol {
            self.problems.push(format!("{name}: tolerance {:e} looser than {tol:e}", p.tolerance));
        }
        if !p.ok {
            self.problems.push(format!("{name}: {} of {} trials failed, worst {:e}", p.failed, p.trials, p.worst));
        }
        self
    }

    fn require(&mut self, ok: bool, what: &str) -> &mut Self {
        if !ok {
            self.problems.push(what.into());
        }
        self
    }

    fn result(&mut self) -> Vec<String> {
        std::mem::take(&mut self.problems)
    }
}

fn full_report() -> SuiteReport {
    run_suite(&VerifyOptions { suite: Suite::All, trials: TRIALS, seed: DEFAULT_SEED, dims: vec![2, 3], tol: Tolerances::default() })
}

/// Runs the binary's verify subcommand and returns the report bytes.
fn cli_report(trials: usize, threads: &str) -> Result<Vec<u8>, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("report.json");
    let out = Command::new(env!("CARGO_BIN_EXE_funkspace"))
        .args(["verify", "--suite", "all", "--trials", &trials.to_string(), "--seed", &DEFAULT_SEED.to_string(), "--report"])
        .arg(&path)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    // Exit code 1 only means a property failed, which tiny runs may do.
    if !matches!(out.status.code(), Some(0 | 1)) {
        return Err(format!("verify exited with {}", out.status));
    }
    std::fs::read(&path).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let rep = full_report();
    let mut c = Check::new(&rep);
    let mut results: Vec<(u32, &str, Vec<String>)> = vec![(1, "Klein disk identity", c.bound("klein_identity", 9, 1e-10).result())];
    results.push((
        2,
        "F1 = F2 on polytopes and ellipsoids",
        c.bound("f1_equals_f2_polytopes", 1000, 1e-9).bound("f1_equals_f2_ellipsoids", 300, 1e-6).require(rep.dims == [2, 3], "dims must be 2,3").result(),
    ));
    results.push((
        3,
        "F3 = F1 and straight segment length = F1",
        c.bound("f3_equals_f1", 100, 1e-6).bound("straight_segment_length_equals_f1", 1, 1e-8).result(),
    ));
    results.push((
        4,
        "triangle inequalities",
        c.bound("triangle_f1", 10_000, 1e-9)
            .bound("triangle_f2", 10_000, 1e-9)
            .bound("triangle_hilbert", 10_000, 1e-9)
            .bound("triangle_wp_f2_raw", 10_000, 1e-9)
            .bound("triangle_wp_hilbert", 10_000, 1e-9)
            .result(),
    ));
    results.push((5, "exact additivity on the square triple", c.bound("exact_additivity_square_triple", 1, 1e-12).result()));
    results.push((6, "derivative formulas and nonnegative second derivatives", c.bound("derivative_formulas", 1000, 1e-6).result()));
    results.push((
        7,
        "convexity dichotomy",
        c.bound("convexity_from_base_strictly_convex", 1000, 1e-9).witness("non_convexity_to_base_on_disk", 1e-6).result(),
    ));
    results.push((8, "midpoint dichotomy", c.bound("busemann_midpoint_disk", 1000, 1e-9).witness("busemann_violation_square", 1e-6).result()));
    let paths = rep.tolerances.get("paths_per_pair").and_then(|v| v.as_u64()).unwrap_or(0);
    results.push((
        9,
        "model comparison chain and perpendicular collapse",
        c.bound("chain_phi1_le_f2_raw", 1000, 1e-9)
            .bound("chain_f2_raw_le_path_length", 1000, 1e-8)
            .bound("chain_f1_est_le_phi1", 1000, 1e-8)
            .bound("perpendicular_collapse", 1, 1e-10)
            .require(paths >= 100, "fewer than 100 paths per pair")
            .result(),
    ));
    results.push((
        10,
        "affine and isometry invariance",
        c.bound("affine_invariance_f1", 1000, 1e-9)
            .bound("affine_invariance_hilbert", 1000, 1e-9)
            .bound("isometry_invariance_model_metrics", 1000, 1e-9)
            .result(),
    ));

    // The in-process report must equal a fresh run of the binary byte for
    // byte, and two small runs with different thread counts must agree.
    let mut det = Vec::new();
    match cli_report(TRIALS, "1") {
        Ok(bytes) if bytes == rep.to_json().as_bytes() => {}
        Ok(_) => det.push("binary report differs from the in-process report".to_string()),
        Err(e) => det.push(e),
    }
    match (cli_report(5, "1"), cli_report(5, "4")) {
        (Ok(a), Ok(b)) if a == b => {}
        (Ok(_), Ok(_)) => det.push("reports differ across thread counts".into()),
        (Err(e), _) | (_, Err(e)) => det.push(e),
    }
    results.push((11, "byte-identical reports for a fixed seed", det));

    let mut failed = 0;
    for (n, what, problems) in &results {
        if problems.is_empty() {
            println!("PASS criterion {n:>2}: {what}");
        } else {
            failed += 1;
            println!("FAIL criterion {n:>2}: {what}");
            for p in problems {
                println!("      {p}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
