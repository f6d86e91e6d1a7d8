use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use funkspace::ball::{compute_ball, BALL_TOL};
use funkspace::metrics::{dist, Metric, Tolerances};
use funkspace::render::{render_scene, BallRequest, RenderOptions};
use funkspace::scene::{parse_scene, Scene};
use funkspace::verify::{run_suite, PropertyKind, Suite, VerifyOptions};
use funkspace::{CliError, Result, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "funkspace", version, about = "Funk, Hilbert and model Funk metrics on convex domains")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Distance between two named points of a scene.
    Dist {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, value_enum)]
        metric: Metric,
        /// Print the full JSON record instead of the value.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Boundary of the ball {y : F(center, y) < radius}, as CSV or SVG (by extension).
    Ball {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        center: String,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 128)]
        samples: usize,
        #[arg(long, value_enum, default_value = "f1")]
        metric: Metric,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Run a seeded property suite; exits nonzero if an asserted property fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, env = "FUNKSPACE_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        dims: Vec<usize>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// SVG figure of a scene.
    Render {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Ball overlay `center:radius[:metric]`; repeatable.
        #[arg(long = "ball")]
        balls: Vec<BallRequest>,
        /// Geodesic segment `a:b` between named points; repeatable.
        #[arg(long = "segment")]
        segments: Vec<String>,
        #[arg(long, default_value_t = 128)]
        samples: usize,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Args, Clone)]
struct TolArgs {
    /// Random ascent starts for the F2 supremum on smooth bodies.
    #[arg(long, default_value_t = 32)]
    f2_starts: usize,
    #[arg(long, default_value_t = 1e-10)]
    f2_grad_tol: f64,
    /// Interior knots of F3 paths.
    #[arg(long, default_value_t = 5)]
    f3_knots: usize,
    #[arg(long, default_value_t = 8)]
    f3_restarts: usize,
    #[arg(long, default_value_t = 1e-10)]
    f3_tol: f64,
    /// Interior knots of model paths (wp-f1, wp-f3).
    #[arg(long, default_value_t = 5)]
    path_knots: usize,
    #[arg(long, default_value_t = 8)]
    path_restarts: usize,
    #[arg(long, default_value_t = 1e-9)]
    path_tol: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        t.f2.random_starts = self.f2_starts;
        t.f2.grad_tol = self.f2_grad_tol;
        t.f3.knots = self.f3_knots;
        t.f3.restarts = self.f3_restarts;
        t.f3.tol = self.f3_tol;
        t.model_path.knots = self.path_knots;
        t.model_path.restarts = self.path_restarts;
        t.model_path.tol = self.path_tol;
        t
    }
}

fn load(path: &Path) -> Result<Scene> {
    let scene = parse_scene(&std::fs::read_to_string(path)?)?;
    for w in &scene.warnings {
        eprintln!("warning: {w}");
    }
    Ok(scene)
}

fn is_svg(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg"))
}

fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Dist { scene, from, to, metric, json, tol } => {
            let rec = dist(&load(&scene)?, &from, &to, metric, &tol.tolerances())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rec)?);
            } else {
                println!("{}", rec.value);
            }
        }
        Cmd::Ball { scene, center, radius, samples, metric, out, tol } => {
            let scene = load(&scene)?;
            let t = tol.tolerances();
            if is_svg(&out) {
                let opts = RenderOptions {
                    balls: vec![BallRequest { center, radius, metric: Some(metric) }],
                    segments: vec![],
                    ball_samples: samples,
                };
                std::fs::write(&out, render_scene(&scene, &opts, &t)?)?;
            } else {
                let ball = compute_ball(&scene, &center, radius, samples, metric, &t)?;
                let unbounded = ball.samples.iter().filter(|s| s.status != funkspace::ball::RayStatus::Reached).count();
                if unbounded > 0 {
                    eprintln!("warning: radius unreachable in {unbounded} of {samples} directions (marked unbounded)");
                }
                std::fs::write(&out, ball.to_csv())?;
            }
            eprintln!("ball: bisection tolerance {BALL_TOL}");
        }
        Cmd::Verify { suite, trials, seed, dims, report, tol } => {
            if trials == 0 {
                return Err(CliError::Argument("trials must be at least 1".into()));
            }
            if dims.is_empty() || dims.iter().any(|d| !(2..=3).contains(d)) {
                return Err(CliError::Argument("dims must be drawn from 2 and 3".into()));
            }
            let start = Instant::now();
            let rep = run_suite(&VerifyOptions { suite, trials, seed, dims, tol: tol.tolerances() });
            for p in &rep.properties {
                let kind = match p.kind {
                    PropertyKind::Bound => "bound",
                    PropertyKind::Witness => "witness",
                };
                eprintln!(
                    "{} {:<40} {kind:<7} trials={:<6} failed={:<4} worst={:e} tol={:e} ({:.1} s)",
                    if p.ok { "PASS" } else { "FAIL" },
                    p.name,
                    p.trials,
                    if p.kind == PropertyKind::Bound { p.failed } else { usize::from(!p.ok) },
                    p.worst,
                    p.tolerance,
                    p.elapsed
                );
            }
            for (k, v) in &rep.tolerances {
                eprintln!("tolerance {k} = {v}");
            }
            eprintln!("wall time {:.1} s", start.elapsed().as_secs_f64());
            match report {
                Some(path) => std::fs::write(path, rep.to_json())?,
                None => print!("{}", rep.to_json()),
            }
            if !rep.all_passed {
                return Ok(ExitCode::FAILURE);
            }
        }
        Cmd::Render { scene, out, balls, segments, samples, tol } => {
            let scene = load(&scene)?;
            let segments = segments
                .iter()
                .map(|s| {
                    s.split_once(':')
                        .map(|(a, b)| (a.to_string(), b.to_string()))
                        .ok_or_else(|| CliError::Argument(format!("expected a:b, got `{s}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let opts = RenderOptions { balls, segments, ball_samples: samples };
            std::fs::write(&out, render_scene(&scene, &opts, &tol.tolerances())?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
