//! Coordinate descent over the interior knots of a piecewise path.
//!
//! Knots live in a flat chart (`Vec<f64>` per knot). The path cost is the sum
//! of per-segment costs, so moving one knot only re-evaluates its two
//! adjacent segments. Endpoints are fixed.

/// Settings for [`coordinate_descent`].
#[derive(Debug, Clone, Copy)]
pub struct DescentOptions {
    /// A sweep that improves the total by less than this is considered stalled.
    pub tol: f64,
    /// Initial trial step along each coordinate axis.
    pub initial_step: f64,
    /// Stop refining once the trial step falls below this.
    pub min_step: f64,
    pub max_sweeps: usize,
}

impl DescentOptions {
    pub fn for_length(length: f64, tol: f64) -> Self {
        let scale = length.max(1e-12);
        Self { tol, initial_step: 0.1 * scale, min_step: 1e-7 * scale, max_sweeps: 60 }
    }
}

/// Sweep cap for randomly perturbed starts; the unperturbed start runs to convergence.
pub const PERTURBED_SWEEPS: usize = 25;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Minimizes the total segment cost by moving interior knots one axis at a time.
///
/// `segment_cost(a, b)` returns `None` when the segment is infeasible (for
/// example a knot left the domain); such moves are rejected. Returns the final
/// total cost, or `None` if the starting path is itself infeasible.
pub fn coordinate_descent<F>(knots: &mut [Vec<f64>], mut segment_cost: F, opts: DescentOptions) -> Option<f64>
where
    F: FnMut(&[f64], &[f64]) -> Option<f64>,
{
    let n = knots.len();
    let mut costs = Vec::with_capacity(n.saturating_sub(1));
    for w in knots.windows(2) {
        costs.push(segment_cost(&w[0], &w[1])?);
    }
    let mut total: f64 = costs.iter().sum();
    if n < 3 {
        return Some(total);
    }
    let dim = knots[0].len();
    let mut step = opts.initial_step;

    for _sweep in 0..opts.max_sweeps {
        let before = total;
        let start: Vec<Vec<f64>> = knots.to_vec();
        for i in 1..n - 1 {
            for axis in 0..dim {
                let base = knots[i][axis];
                let current = costs[i - 1] + costs[i];
                let mut eval = |delta: f64, knots: &mut [Vec<f64>]| -> Option<(f64, f64)> {
                    knots[i][axis] = base + delta;
                    let left = segment_cost(&knots[i - 1], &knots[i]);
                    let right = left.and_then(|_| segment_cost(&knots[i], &knots[i + 1]));
                    knots[i][axis] = base;
                    Some((left?, right?))
                };
                let value = |r: Option<(f64, f64)>| r.map_or(f64::INFINITY, |(l, r)| l + r);

                let plus = value(eval(step, knots));
                let minus = value(eval(-step, knots));
                let dir = if plus < current && plus <= minus {
                    1.0
                } else if minus < current {
                    -1.0
                } else {
                    continue;
                };

                // Expand until the objective turns up, bracketing a minimum.
                let mut lo = 0.0;
                let mut mid = step;
                let mut f_mid = if dir > 0.0 { plus } else { minus };
                let mut hi = 2.0 * step;
                let mut f_hi = value(eval(dir * hi, knots));
                let mut expansions = 0;
                while f_hi < f_mid && expansions < 40 {
                    lo = mid;
                    mid = hi;
                    f_mid = f_hi;
                    hi *= 2.0;
                    f_hi = value(eval(dir * hi, knots));
                    expansions += 1;
                }

                // Golden-section search on [lo, hi].
                let mut a = lo;
                let mut b = hi;
                let mut best_t = mid;
                let mut best_f = f_mid;
                let mut c = b - GOLDEN * (b - a);
                let mut d = a + GOLDEN * (b - a);
                let mut fc = value(eval(dir * c, knots));
                let mut fd = value(eval(dir * d, knots));
                for _ in 0..60 {
                    if (b - a).abs() <= (1e-3 * step).max(1e-14 * (1.0 + base.abs())) {
                        break;
                    }
                    if fc < fd {
                        b = d;
                        d = c;
                        fd = fc;
                        c = b - GOLDEN * (b - a);
                        fc = value(eval(dir * c, knots));
                    } else {
                        a = c;
                        c = d;
                        fc = fd;
                        d = a + GOLDEN * (b - a);
                        fd = value(eval(dir * d, knots));
                    }
                    for (t, f) in [(c, fc), (d, fd)] {
                        if f < best_f {
                            best_f = f;
                            best_t = t;
                        }
                    }
                }
                if best_f < current {
                    if let Some((l, r)) = eval(dir * best_t, knots) {
                        knots[i][axis] = base + dir * best_t;
                        costs[i - 1] = l;
                        costs[i] = r;
                    }
                }
            }
        }
        total = costs.iter().sum();
        if before - total > opts.tol {
            if let Some(t) = pattern_move(knots, &start, &mut costs, &mut segment_cost) {
                total = t;
            }
        }
        if before - total < opts.tol {
            if step <= opts.min_step {
                break;
            }
            step *= 0.25;
        }
    }
    Some(total)
}

fn path_cost<F>(knots: &[Vec<f64>], segment_cost: &mut F) -> Option<Vec<f64>>
where
    F: FnMut(&[f64], &[f64]) -> Option<f64>,
{
    knots.windows(2).map(|w| segment_cost(&w[0], &w[1])).collect()
}

/// Extrapolates along the displacement produced by the last sweep
/// (a Hooke–Jeeves pattern move). Returns the new total if it improved.
fn pattern_move<F>(knots: &mut [Vec<f64>], start: &[Vec<f64>], costs: &mut Vec<f64>, segment_cost: &mut F) -> Option<f64>
where
    F: FnMut(&[f64], &[f64]) -> Option<f64>,
{
    let current: f64 = costs.iter().sum();
    let moved: Vec<Vec<f64>> = knots.to_vec();
    let at = |t: f64| -> Vec<Vec<f64>> {
        moved
            .iter()
            .zip(start)
            .map(|(m, s)| m.iter().zip(s).map(|(m, s)| m + t * (m - s)).collect())
            .collect()
    };
    let mut eval = |t: f64| -> (f64, Option<Vec<f64>>) {
        match path_cost(&at(t), segment_cost) {
            Some(c) => (c.iter().sum(), Some(c)),
            None => (f64::INFINITY, None),
        }
    };
    let mut best = (0.0, current);
    let mut t = 1.0;
    let mut best_costs = None;
    for _ in 0..20 {
        let (v, c) = eval(t);
        if v < best.1 {
            best = (t, v);
            best_costs = c;
            t *= 2.0;
        } else {
            break;
        }
    }
    let c = best_costs?;
    let next = at(best.0);
    for (k, n) in knots.iter_mut().zip(next) {
        *k = n;
    }
    *costs = c;
    Some(best.1)
}
