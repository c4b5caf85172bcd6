#![allow(dead_code)]

use twoway_tc::allocation::{split_objective, AllocationProblem};

/// Argmin of the split objective over `points` evenly spaced interior points,
/// refined by golden-section search on the neighbouring cells.
pub fn grid_argmin(p: &AllocationProblem, points: usize) -> f64 {
    let f_total = p.f_total();
    let step = f_total / (points + 1) as f64;
    let f = |x: f64| split_objective(x, p).unwrap();
    let (mut best, mut best_val) = (step, f(step));
    for k in 2..=points {
        let x = k as f64 * step;
        let v = f(x);
        if v < best_val {
            best = x;
            best_val = v;
        }
    }
    let (mut a, mut b) = ((best - step).max(1e-12 * f_total), (best + step).min(f_total * (1.0 - 1e-12)));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-12 * f_total {
        let c = b - ratio * (b - a);
        let d = a + ratio * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}
