//! Success probability as a function of density, from coupled trials.
//!
//! Each trial generates its interferers in order of an activation level: the
//! points with level at most `lambda` form a Poisson process of intensity
//! `lambda` on the disk. Interference in both bands then only grows with
//! `lambda`, so every trial has a critical density above which it fails, and
//! the estimated success curve is exactly non-increasing. Inverting it for a
//! target outage is a bisection on a monotone step function.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::beamforming::{BeamformingFades, GainModel};
use super::estimate::TrialEstimate;
use super::region::{run_trials, Parallelism, SimRegion, TrialPlan};
use super::sampling::{draw_pair, region_center};
use crate::analytic::{density_interval_at_outage, OutageTarget, PathLoss, SirThresholds};
use crate::error::{invalid, Error, Result};

const MAX_CAP_DOUBLINGS: usize = 12;
const MAX_BISECTIONS: usize = 200;

/// Critical densities of every trial, sorted. Trials that survive up to the
/// cap are recorded as `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessCurve {
    joint: Vec<f64>,
    fwd: Vec<f64>,
    rev: Vec<f64>,
    lambda_cap: f64,
}

/// Result of inverting the success curve at a target outage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEstimate {
    pub lambda: f64,
    pub bracket: (f64, f64),
    pub joint: TrialEstimate,
    pub fwd: TrialEstimate,
    pub rev: TrialEstimate,
}

/// Walks the activation levels of one trial up to `cap` and returns the
/// levels at which the forward and reverse links first fail.
pub(crate) fn critical_levels<R, F>(
    desired: (f64, f64),
    betas: (f64, f64),
    cap: f64,
    region: &SimRegion,
    pl: &PathLoss,
    rng: &mut R,
    mut interferer_fades: F,
) -> (f64, f64)
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> (f64, f64),
{
    let center = region_center(pl);
    let tx0 = [pl.d(), 0.0];
    let half = -0.5 * pl.alpha();
    let area = region.area();
    let (mut i_fwd, mut i_rev) = (0.0, 0.0);
    let mut crit_fwd = if desired.0 > 0.0 { f64::INFINITY } else { 0.0 };
    let mut crit_rev = if desired.1 > 0.0 { f64::INFINITY } else { 0.0 };
    let mut level = 0.0;
    while crit_fwd.is_infinite() || crit_rev.is_infinite() {
        let step: f64 = Exp1.sample(rng);
        level += step / area;
        if level > cap {
            break;
        }
        let (tx, rx) = draw_pair(center, region.radius(), pl.d(), rng);
        let (f_fwd, f_rev) = interferer_fades(rng);
        i_fwd += (tx[0] * tx[0] + tx[1] * tx[1]).powf(half) * f_fwd;
        let (dx, dy) = (rx[0] - tx0[0], rx[1] - tx0[1]);
        i_rev += (dx * dx + dy * dy).powf(half) * f_rev;
        if crit_fwd.is_infinite() && desired.0 <= betas.0 * i_fwd {
            crit_fwd = level;
        }
        if crit_rev.is_infinite() && desired.1 <= betas.1 * i_rev {
            crit_rev = level;
        }
    }
    (crit_fwd, crit_rev)
}

fn survivors(sorted: &[f64], lambda: f64) -> u64 {
    (sorted.len() - sorted.partition_point(|&c| c <= lambda)) as u64
}

impl SuccessCurve {
    fn from_levels(levels: Vec<(f64, f64)>, lambda_cap: f64) -> Self {
        let mut fwd: Vec<f64> = levels.iter().map(|l| l.0).collect();
        let mut rev: Vec<f64> = levels.iter().map(|l| l.1).collect();
        let mut joint: Vec<f64> = levels.iter().map(|l| l.0.min(l.1)).collect();
        for v in [&mut fwd, &mut rev, &mut joint] {
            v.sort_by(f64::total_cmp);
        }
        Self {
            joint,
            fwd,
            rev,
            lambda_cap,
        }
    }

    /// Single-antenna links with Rayleigh fading on both bands.
    pub fn rayleigh(
        th: &SirThresholds,
        lambda_cap: f64,
        plan: &TrialPlan,
        region: &SimRegion,
        pl: &PathLoss,
        par: Parallelism,
    ) -> Self {
        let betas = (th.beta1(), th.beta2());
        let levels = run_trials(plan, par, |rng| {
            let desired = (Exp1.sample(rng), Exp1.sample(rng));
            critical_levels(desired, betas, lambda_cap, region, pl, rng, |r| {
                (Exp1.sample(r), Exp1.sample(r))
            })
        });
        Self::from_levels(levels, lambda_cap)
    }

    /// Beamformed forward link and single-antenna feedback link.
    #[allow(clippy::too_many_arguments)]
    pub fn beamforming(
        n_antennas: u32,
        model: GainModel,
        beta1: f64,
        beta3: f64,
        lambda_cap: f64,
        plan: &TrialPlan,
        region: &SimRegion,
        pl: &PathLoss,
        par: Parallelism,
    ) -> Self {
        let levels = run_trials(plan, par, |rng| {
            let desired = (
                BeamformingFades::draw_desired(n_antennas, model, rng),
                Exp1.sample(rng),
            );
            critical_levels(desired, (beta1, beta3), lambda_cap, region, pl, rng, |r| {
                (
                    BeamformingFades::draw_interferer(n_antennas, model, r),
                    Exp1.sample(r),
                )
            })
        });
        Self::from_levels(levels, lambda_cap)
    }

    pub fn n_trials(&self) -> u64 {
        self.joint.len() as u64
    }

    pub fn lambda_cap(&self) -> f64 {
        self.lambda_cap
    }

    fn estimate(&self, sorted: &[f64], lambda: f64) -> TrialEstimate {
        assert!(
            lambda <= self.lambda_cap,
            "density {lambda} beyond the simulated cap {}",
            self.lambda_cap
        );
        TrialEstimate::from_counts(survivors(sorted, lambda), self.n_trials())
    }

    pub fn joint_at(&self, lambda: f64) -> TrialEstimate {
        self.estimate(&self.joint, lambda)
    }

    pub fn fwd_at(&self, lambda: f64) -> TrialEstimate {
        self.estimate(&self.fwd, lambda)
    }

    pub fn rev_at(&self, lambda: f64) -> TrialEstimate {
        self.estimate(&self.rev, lambda)
    }

    /// Density at which the estimated joint success crosses `1 - eps`.
    pub fn density_at_outage(&self, eps: f64, rel_tol: f64) -> Result<DensityEstimate> {
        self.invert(&self.joint, eps, rel_tol)
    }

    /// Same inversion on the forward marginal alone.
    pub fn fwd_density_at_outage(&self, eps: f64, rel_tol: f64) -> Result<DensityEstimate> {
        self.invert(&self.fwd, eps, rel_tol)
    }

    fn invert(&self, sorted: &[f64], eps: f64, rel_tol: f64) -> Result<DensityEstimate> {
        let ot = OutageTarget::new(eps)?;
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(invalid("rel_tol", format!("must lie in (0, 1), got {rel_tol}")));
        }
        let n = self.n_trials() as f64;
        let target = ot.success();
        let p = |lambda: f64| survivors(sorted, lambda) as f64 / n;
        if p(self.lambda_cap) >= target {
            return Err(Error::NonConvergence(format!(
                "success at the density cap {} is still above {target}",
                self.lambda_cap
            )));
        }
        let (mut lo, mut hi) = (0.0, self.lambda_cap);
        for _ in 0..MAX_BISECTIONS {
            if hi - lo <= rel_tol * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if p(mid) >= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        let target_ci = 1.96 * (ot.eps() * target / n).sqrt();
        let jump = p(lo) - p(hi);
        if jump > target_ci {
            return Err(Error::NonConvergence(format!(
                "success curve drops by {jump} across the final bracket, more than the target interval {target_ci}; raise n_trials"
            )));
        }
        let joint = TrialEstimate::from_counts(survivors(&self.joint, lambda), self.n_trials());
        if (p(lambda) - target).abs() > target_ci {
            return Err(Error::NonConvergence(format!(
                "estimated success {} is outside {target} +/- {target_ci}",
                p(lambda)
            )));
        }
        Ok(DensityEstimate {
            lambda,
            bracket: (lo, hi),
            joint,
            fwd: self.fwd_at(lambda),
            rev: self.rev_at(lambda),
        })
    }
}

/// Builds curves with a growing density cap until the joint success at the
/// cap falls below `1 - eps_max`.
fn curve_for_outage(
    eps_max: f64,
    initial_cap: f64,
    region: Option<SimRegion>,
    auto_region: impl Fn(f64) -> Result<SimRegion>,
    build: impl Fn(f64, &SimRegion) -> SuccessCurve,
) -> Result<SuccessCurve> {
    let target = OutageTarget::new(eps_max)?.success();
    let mut cap = initial_cap;
    for _ in 0..MAX_CAP_DOUBLINGS {
        let reg = match region {
            Some(r) => r,
            None => auto_region(cap)?,
        };
        let curve = build(cap, &reg);
        if curve.joint_at(cap).p_hat < target {
            return Ok(curve);
        }
        cap *= 2.0;
    }
    Err(Error::NonConvergence(format!(
        "joint success stays above {target} up to density {cap}"
    )))
}

impl SuccessCurve {
    /// Rayleigh curve whose cap covers every outage up to `eps_max`.
    pub fn rayleigh_for_outage(
        eps_max: f64,
        th: &SirThresholds,
        plan: &TrialPlan,
        region: Option<SimRegion>,
        pl: &PathLoss,
        par: Parallelism,
    ) -> Result<Self> {
        let ot = OutageTarget::new(eps_max)?;
        let initial = 2.0 * density_interval_at_outage(&ot, th)?.upper;
        curve_for_outage(
            eps_max,
            initial,
            region,
            |cap| SimRegion::auto(pl, cap, th.beta1() + th.beta2()),
            |cap, reg| Self::rayleigh(th, cap, plan, reg, pl, par),
        )
    }

    /// Beamforming curve whose cap covers every outage up to `eps_max`.
    #[allow(clippy::too_many_arguments)]
    pub fn beamforming_for_outage(
        eps_max: f64,
        n_antennas: u32,
        model: GainModel,
        beta1: f64,
        beta3: f64,
        plan: &TrialPlan,
        region: Option<SimRegion>,
        pl: &PathLoss,
        par: Parallelism,
    ) -> Result<Self> {
        let ot = OutageTarget::new(eps_max)?;
        // Start from the single-antenna density on the same thresholds.
        let th = SirThresholds::new(beta1, beta3, pl.alpha())?;
        let initial = 2.0 * density_interval_at_outage(&ot, &th)?.upper;
        curve_for_outage(
            eps_max,
            initial,
            region,
            |cap| SimRegion::auto(pl, cap, beta1 + beta3),
            |cap, reg| Self::beamforming(n_antennas, model, beta1, beta3, cap, plan, reg, pl, par),
        )
    }
}

/// Largest density whose simulated joint success is `1 - eps`, to a relative
/// bracket of `rel_tol`. With `region = None` the disk is sized automatically.
pub fn estimate_density_at_outage(
    eps: f64,
    th: &SirThresholds,
    plan: &TrialPlan,
    region: Option<SimRegion>,
    pl: &PathLoss,
    rel_tol: f64,
    par: Parallelism,
) -> Result<DensityEstimate> {
    SuccessCurve::rayleigh_for_outage(eps, th, plan, region, pl, par)?.density_at_outage(eps, rel_tol)
}

/// Beamforming counterpart of [`estimate_density_at_outage`].
#[allow(clippy::too_many_arguments)]
pub fn estimate_beamforming_density_at_outage(
    eps: f64,
    n_antennas: u32,
    model: GainModel,
    beta1: f64,
    beta3: f64,
    plan: &TrialPlan,
    region: Option<SimRegion>,
    pl: &PathLoss,
    rel_tol: f64,
    par: Parallelism,
) -> Result<DensityEstimate> {
    SuccessCurve::beamforming_for_outage(eps, n_antennas, model, beta1, beta3, plan, region, pl, par)?
        .density_at_outage(eps, rel_tol)
}
