//! Minimization over the unit sphere in dimensions 2 and 3.

use super::Point;

/// Deterministic, roughly uniform probe directions.
pub(super) fn probes(dim: usize) -> Vec<Point> {
    match dim {
        2 => (0..360)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / 360.0;
                Point::from_vec(vec![a.cos(), a.sin()])
            })
            .collect(),
        _ => {
            // Fibonacci lattice.
            let n = 800;
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
                    let r = (1.0 - z * z).sqrt();
                    let a = golden * i as f64;
                    Point::from_vec(vec![r * a.cos(), r * a.sin(), z])
                })
                .collect()
        }
    }
}

fn tangent_basis(u: &Point) -> Vec<Point> {
    let d = u.len();
    let mut basis: Vec<Point> = Vec::with_capacity(d - 1);
    for k in 0..d {
        let mut e = Point::zeros(d);
        e[k] = 1.0;
        let mut v = &e - u * u.dot(&e);
        for b in &basis {
            v -= b * b.dot(&v);
        }
        let n = v.norm();
        if n > 1e-6 {
            basis.push(v / n);
        }
        if basis.len() == d - 1 {
            break;
        }
    }
    basis
}

/// Pattern search on the sphere starting from `start`.
pub(super) fn refine_min<F: FnMut(&Point) -> f64>(f: &mut F, start: &Point, step: f64) -> (f64, Point) {
    let mut u = start.clone();
    let mut best = f(&u);
    let mut step = step;
    while step > 1e-14 {
        let mut improved = false;
        for b in tangent_basis(&u) {
            for s in [step, -step] {
                let cand = (&u + &b * s).normalize();
                let v = f(&cand);
                if v < best {
                    best = v;
                    u = cand;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, u)
}

/// Global-ish minimum of `f` over the sphere: probe, then refine the best few.
pub(super) fn minimize<F: FnMut(&Point) -> f64>(mut f: F, dim: usize) -> (f64, Point) {
    let dirs = probes(dim);
    let mut scored: Vec<(f64, usize)> = dirs.iter().enumerate().map(|(i, u)| (f(u), i)).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let spacing = if dim == 2 { std::f64::consts::TAU / 360.0 } else { 0.15 };
    let mut best = (f64::INFINITY, dirs[0].clone());
    for &(_, i) in scored.iter().take(4) {
        let cand = refine_min(&mut f, &dirs[i], spacing);
        if cand.0 < best.0 {
            best = cand;
        }
    }
    best
}
