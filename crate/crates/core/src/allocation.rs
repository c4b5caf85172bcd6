//! Optimal split of a band between the two directions of a link.
//!
//! At fixed outage and rates the capacity bounds scale as `1 / f(x)` with
//!
//! ```text
//! f(x) = (2^(b_tr/x) - 1)^delta + (2^(b_rt/(F - x)) - 1)^delta,   0 < x < F
//! ```
//!
//! `f` is strictly convex, `f'(x) = -delta ln2 g(x)` where
//! `g(x) = h(b_tr/x)/b_tr - h(b_rt/(F-x))/b_rt` and `h(t) = t^2 2^t (2^t - 1)^(delta-1)`.
//! `g` runs from `+inf` to `-inf` across the interval with a single sign change,
//! so the optimum is found by bisection on the sign of `g`.
//!
//! Exponentials are handled in log space: values that leave the `f64` range
//! saturate to infinity and the bisection only ever compares logarithms.

use std::cmp::Ordering;
use std::f64::consts::LN_2;

use crate::analytic::{PathLoss, TrafficSpec};
use crate::error::{finite, invalid, Error, Result};

/// Distance of the initial bracket from the band edges, relative to `f_total`.
pub const EDGE_FRACTION: f64 = 1e-9;

/// Default bracket width, relative to `f_total`.
pub const DEFAULT_TOL_FRACTION: f64 = 1e-9;

/// Parameters of the bandwidth-split problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllocationProblem {
    traffic: TrafficSpec,
    f_total: f64,
    delta: f64,
}

impl AllocationProblem {
    pub fn new(traffic: TrafficSpec, f_total: f64, delta: f64) -> Result<Self> {
        finite("f_total", f_total)?;
        finite("delta", delta)?;
        if f_total <= 0.0 {
            return Err(invalid("f_total", format!("must be positive, got {f_total}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(invalid("delta", format!("must lie in (0, 1), got {delta}")));
        }
        if traffic.b_rt() <= 0.0 {
            return Err(invalid(
                "b_rt",
                "both rates must be positive for the split problem",
            ));
        }
        Ok(Self {
            traffic,
            f_total,
            delta,
        })
    }

    pub fn from_path_loss(traffic: TrafficSpec, f_total: f64, pl: &PathLoss) -> Result<Self> {
        Self::new(traffic, f_total, pl.delta())
    }

    pub fn traffic(&self) -> &TrafficSpec {
        &self.traffic
    }

    pub fn f_total(&self) -> f64 {
        self.f_total
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    fn check_interior(&self, x: f64) -> Result<()> {
        if x.is_finite() && x > 0.0 && x < self.f_total {
            Ok(())
        } else {
            Err(invalid(
                "x",
                format!("forward bandwidth must lie in (0, {}), got {x}", self.f_total),
            ))
        }
    }

    /// Log of the two terms of `g`, `ln(h(b_tr/x)/b_tr)` and `ln(h(b_rt/(F-x))/b_rt)`.
    fn ln_stationarity_terms(&self, x: f64) -> (f64, f64) {
        let (b_tr, b_rt) = (self.traffic.b_tr(), self.traffic.b_rt());
        (
            ln_h(b_tr / x, self.delta) - b_tr.ln(),
            ln_h(b_rt / (self.f_total - x), self.delta) - b_rt.ln(),
        )
    }

    fn stationarity_sign(&self, x: f64) -> Ordering {
        let (a, b) = self.ln_stationarity_terms(x);
        a.partial_cmp(&b).unwrap_or(Ordering::Equal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllocationResult {
    pub f_tr_star: f64,
    pub f_rt_star: f64,
    pub objective_at_star: f64,
    /// `g(x*)` normalized by the sum of its two terms.
    pub residual: f64,
    pub bracket_width: f64,
    pub proportional: f64,
    /// `f(x_prop) / f(x*) - 1`.
    pub gain_vs_proportional: f64,
}

/// `ln(2^t - 1)` for `t >= 0`, without overflow for large `t`.
fn ln_pow2_minus_one(t: f64) -> f64 {
    let y = t * LN_2;
    if y > 36.0 {
        y + (-(-y).exp()).ln_1p()
    } else {
        y.exp_m1().ln()
    }
}

fn ln_h(t: f64, delta: f64) -> f64 {
    if t == 0.0 {
        return f64::NEG_INFINITY;
    }
    2.0 * t.ln() + t * LN_2 + (delta - 1.0) * ln_pow2_minus_one(t)
}

/// `h(t) = t^2 2^t (2^t - 1)^(delta - 1)`, with `h(0) = 0`.
pub fn h_kernel(t: f64, delta: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(invalid("t", format!("must be non-negative, got {t}")));
    }
    if t.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(ln_h(t, delta).exp())
}

fn objective_term(b: f64, width: f64, delta: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        (delta * ln_pow2_minus_one(b / width)).exp()
    }
}

/// `f(x)`, the quantity the capacity bounds are inversely proportional to.
pub fn split_objective(x: f64, p: &AllocationProblem) -> Result<f64> {
    p.check_interior(x)?;
    Ok(objective_term(p.traffic.b_tr(), x, p.delta)
        + objective_term(p.traffic.b_rt(), p.f_total - x, p.delta))
}

/// The stationarity function `g(x)`; its root is the optimal forward bandwidth.
pub fn split_derivative(x: f64, p: &AllocationProblem) -> Result<f64> {
    p.check_interior(x)?;
    let (a, b) = p.ln_stationarity_terms(x);
    let big = a.max(b);
    if big > 700.0 {
        // Both terms may overflow; only the ordering is meaningful then.
        return Ok(match a.partial_cmp(&b) {
            Some(Ordering::Greater) => f64::INFINITY,
            Some(Ordering::Less) => f64::NEG_INFINITY,
            _ => 0.0,
        });
    }
    Ok(a.exp() - b.exp())
}

fn normalized_residual(p: &AllocationProblem, x: f64) -> f64 {
    let (a, b) = p.ln_stationarity_terms(x);
    // (e^a - e^b) / (e^a + e^b) = tanh((a - b) / 2)
    ((a - b) / 2.0).tanh()
}

/// `f_total b_tr / (b_tr + b_rt)`; returns `f_total` for one-way traffic.
pub fn proportional_split(traffic: &TrafficSpec, f_total: f64) -> f64 {
    f_total * traffic.b_tr() / traffic.total()
}

impl AllocationProblem {
    pub fn proportional_split(&self) -> f64 {
        proportional_split(&self.traffic, self.f_total)
    }
}

/// Bisection on the sign of `g` down to a bracket of width `tol` Hz.
pub fn optimal_split(p: &AllocationProblem, tol: f64) -> Result<AllocationResult> {
    if tol.is_nan() || tol <= 0.0 || tol.is_infinite() {
        return Err(invalid("tol", format!("must be positive, got {tol}")));
    }
    let eta = EDGE_FRACTION * p.f_total;
    let (mut lo, mut hi) = (eta, p.f_total - eta);
    if p.stationarity_sign(lo) != Ordering::Greater || p.stationarity_sign(hi) != Ordering::Less {
        return Err(Error::BracketFailure { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match p.stationarity_sign(mid) {
            Ordering::Greater => lo = mid,
            Ordering::Less => hi = mid,
            Ordering::Equal => {
                lo = mid;
                hi = mid;
            }
        }
    }
    let x_star = 0.5 * (lo + hi);
    let objective_at_star = split_objective(x_star, p)?;
    let proportional = p.proportional_split();
    let gain = if (proportional - x_star).abs() <= tol.max(hi - lo) {
        0.0
    } else {
        (split_objective(proportional, p)? / objective_at_star - 1.0).max(0.0)
    };
    Ok(AllocationResult {
        f_tr_star: x_star,
        f_rt_star: p.f_total - x_star,
        objective_at_star,
        residual: normalized_residual(p, x_star),
        bracket_width: hi - lo,
        proportional,
        gain_vs_proportional: gain,
    })
}

/// [`optimal_split`] with a bracket of `1e-9 f_total`.
pub fn optimal_split_default(p: &AllocationProblem) -> Result<AllocationResult> {
    optimal_split(p, DEFAULT_TOL_FRACTION * p.f_total)
}

/// Relative capacity gain of the optimal split over the proportional split.
pub fn allocation_gain(p: &AllocationProblem) -> Result<f64> {
    Ok(optimal_split_default(p)?.gain_vs_proportional)
}
