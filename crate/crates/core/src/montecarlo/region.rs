use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::PathLoss;
use crate::error::{finite, invalid, Result};

/// Bound on the success-probability shift caused by ignoring interferers
/// outside the simulation disk, used when the radius is chosen automatically.
pub const TRUNCATION_BUDGET: f64 = 1e-4;

/// Minimum radius as a multiple of the pair distance.
const MIN_RADIUS_FACTOR: f64 = 20.0;

/// Largest mean number of interferers per trial `SimRegion::auto` will accept.
const MAX_MEAN_POINTS: f64 = 5e7;

/// Disk of interferers centered at the typical pair midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimRegion {
    radius: f64,
}

impl SimRegion {
    pub fn new(radius: f64, pl: &PathLoss) -> Result<Self> {
        finite("radius", radius)?;
        let min = MIN_RADIUS_FACTOR * pl.d();
        if radius < min {
            return Err(invalid(
                "radius",
                format!("must be at least {MIN_RADIUS_FACTOR} pair distances ({min} m), got {radius}"),
            ));
        }
        Ok(Self { radius })
    }

    /// Smallest radius (and at least 20 d) for which the truncated far field
    /// shifts the joint success probability by at most [`TRUNCATION_BUDGET`]
    /// at densities up to `lambda_max`.
    ///
    /// Interference beyond distance `rho` from a receiver costs at most
    /// `lambda 2 pi beta rho^(2-alpha) / (alpha - 2)` per band. Receivers of the
    /// reverse band sit up to `d` outside the disk, so `rho = radius - 1.5 d`.
    pub fn auto(pl: &PathLoss, lambda_max: f64, beta_sum: f64) -> Result<Self> {
        let alpha = pl.alpha();
        let rho = if lambda_max > 0.0 && beta_sum > 0.0 {
            (2.0 * PI * lambda_max * beta_sum / ((alpha - 2.0) * TRUNCATION_BUDGET))
                .powf(1.0 / (alpha - 2.0))
        } else {
            0.0
        };
        let radius = (rho + 1.5 * pl.d()).max(MIN_RADIUS_FACTOR * pl.d());
        if lambda_max * PI * radius * radius > MAX_MEAN_POINTS {
            return Err(invalid(
                "radius",
                format!(
                    "automatic radius {radius:.3e} m would need more than {MAX_MEAN_POINTS:e} interferers per trial"
                ),
            ));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub(crate) fn doubled(&self) -> Self {
        Self {
            radius: 2.0 * self.radius,
        }
    }
}

/// Number of trials and the seed every per-trial stream derives from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialPlan {
    n_trials: u64,
    master_seed: u64,
}

impl TrialPlan {
    pub fn new(n_trials: u64, master_seed: u64) -> Result<Self> {
        if n_trials == 0 {
            return Err(invalid("n_trials", "at least one trial is required"));
        }
        Ok(Self {
            n_trials,
            master_seed,
        })
    }

    pub fn n_trials(&self) -> u64 {
        self.n_trials
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// The random stream of one trial, a pure function of the seed and index.
    pub fn trial_rng(&self, trial_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(trial_index);
        rng
    }
}

/// Upper bound on worker threads; `None` uses the ambient rayon pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Parallelism {
    pub threads: Option<usize>,
}

impl Parallelism {
    pub fn threads(n: usize) -> Self {
        Self {
            threads: Some(n.max(1)),
        }
    }

    fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        match self.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("failed to build worker pool")
                .install(op),
            None => op(),
        }
    }
}

/// Runs `trial` for every index of `plan` and returns the results in index order.
pub(crate) fn run_trials<T, F>(plan: &TrialPlan, par: Parallelism, trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync + Send,
{
    par.install(|| {
        (0..plan.n_trials())
            .into_par_iter()
            .map(|i| trial(&mut plan.trial_rng(i)))
            .collect()
    })
}
