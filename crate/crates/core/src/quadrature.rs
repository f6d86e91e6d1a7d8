//! Adaptive Gauss–Legendre quadrature.
//!
//! Each panel is integrated with an `N`-point rule and compared against the
//! sum of the same rule on its two halves. Panels whose estimates agree within
//! their share of the tolerance are accepted; the rest are split. Panels that
//! shrink below a width floor are accepted with their error charged to a
//! budget, so integrands with isolated jumps still terminate.

use std::sync::OnceLock;

use crate::{Error, Result};

const ORDER: usize = 10;
const MAX_DEPTH: usize = 48;
const MIN_WIDTH_FRACTION: f64 = 1e-12;

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<f64> {
    let (nodes, weights) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        let v = f(mid + half * x)?;
        if !v.is_finite() {
            return Err(Error::NumericFailure(format!(
                "non-finite integrand at t = {}",
                mid + half * x
            )));
        }
        sum += w * v;
    }
    Ok(sum * half)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let min_width = MIN_WIDTH_FRACTION * (b - a).abs();
    let whole = panel(&mut f, a, b)?;
    let mut forced_error = 0.0;
    let total = refine(&mut f, a, b, whole, tol, 0, min_width, &mut forced_error)?;
    if forced_error > tol {
        return Err(Error::NumericFailure(format!(
            "quadrature did not converge (unresolved error {forced_error:.3e})"
        )));
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    min_width: f64,
    forced_error: &mut f64,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let left = panel(f, a, m)?;
    let right = panel(f, m, b)?;
    let err = (left + right - whole).abs();
    if err <= tol {
        return Ok(left + right);
    }
    if depth >= MAX_DEPTH || (b - a).abs() <= min_width {
        *forced_error += err;
        return Ok(left + right);
    }
    let l = refine(f, a, m, left, 0.5 * tol, depth + 1, min_width, forced_error)?;
    let r = refine(f, m, b, right, 0.5 * tol, depth + 1, min_width, forced_error)?;
    Ok(l + r)
}
