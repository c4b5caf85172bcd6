//! Trials for an `N`-antenna beamforming transmitter with quantized feedback.
//!
//! The forward desired power is `gamma * |h|^2` with `|h|^2 ~ Gamma(N, 1)`,
//! the norm of an `N`-vector of unit-variance complex Gaussians. Interferers
//! beamform toward their own receivers, so the power they leak toward `Rx0`
//! is the projection of an independent Gaussian vector onto an independent
//! unit vector, which is unit-mean exponential. The feedback message travels
//! over a single effective channel entry on the reverse band.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::estimate::TrialEstimate;
use super::region::{run_trials, Parallelism, SimRegion, TrialPlan};
use super::sampling::{draw_fade_powers, sample_interferer_pairs, PairSample};
use super::trial::interference;
use crate::analytic::PathLoss;

/// How quantized feedback degrades the beamforming gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainModel {
    /// Multiplicative retention factor on the full `Gamma(N, 1)` gain.
    Quantized { gamma: f64 },
    /// Best of `2^bits` isotropic random unit vectors, redrawn every trial.
    RandomCodebook { bits: u32 },
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let v = gaussian_vector(n, rng);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

fn projection(h: &[Complex64], b: &[Complex64]) -> f64 {
    h.iter().zip(b).map(|(x, y)| x * y).sum::<Complex64>().norm_sqr()
}

/// `|h^T b|^2` for an independent `CN(0, I_N)` vector `h` and a uniformly
/// random unit vector `b`.
pub fn draw_projection_power<R: Rng + ?Sized>(n: u32, rng: &mut R) -> f64 {
    let h = gaussian_vector(n as usize, rng);
    let b = unit_vector(n as usize, rng);
    projection(&h, &b)
}

/// Fade powers for one beamforming trial.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingFades {
    pub desired_fwd: f64,
    pub fwd_interferers: Vec<f64>,
    pub desired_fb: f64,
    pub fb_interferers: Vec<f64>,
}

impl BeamformingFades {
    pub(crate) fn draw_desired<R: Rng + ?Sized>(n: u32, model: GainModel, rng: &mut R) -> f64 {
        match model {
            GainModel::Quantized { gamma } => {
                gamma * (0..n).map(|_| -> f64 { Exp1.sample(rng) }).sum::<f64>()
            }
            GainModel::RandomCodebook { bits } => {
                let h: Vec<Complex64> = gaussian_vector(n as usize, rng)
                    .into_iter()
                    .map(|z| z.conj())
                    .collect();
                (0..1u64 << bits)
                    .map(|_| projection(&h, &unit_vector(n as usize, rng)))
                    .fold(0.0, f64::max)
            }
        }
    }

    pub(crate) fn draw_interferer<R: Rng + ?Sized>(n: u32, model: GainModel, rng: &mut R) -> f64 {
        match model {
            GainModel::Quantized { .. } => Exp1.sample(rng),
            GainModel::RandomCodebook { .. } => draw_projection_power(n, rng),
        }
    }

    pub fn draw<R: Rng + ?Sized>(n: u32, model: GainModel, count: usize, rng: &mut R) -> Self {
        let desired_fwd = Self::draw_desired(n, model, rng);
        let fwd_interferers = (0..count)
            .map(|_| Self::draw_interferer(n, model, rng))
            .collect();
        let desired_fb = Exp1.sample(rng);
        Self {
            desired_fwd,
            fwd_interferers,
            desired_fb,
            fb_interferers: draw_fade_powers(count, rng),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeamformingOutcome {
    pub fwd_ok: bool,
    pub fb_ok: bool,
    pub joint_ok: bool,
}

/// Forward data link against `beta1` and feedback link against `beta3`.
pub fn beamforming_trial(
    sample: &PairSample,
    fades: &BeamformingFades,
    beta1: f64,
    beta3: f64,
    pl: &PathLoss,
) -> BeamformingOutcome {
    assert_eq!(sample.len(), fades.fwd_interferers.len());
    assert_eq!(sample.len(), fades.fb_interferers.len());
    let (w_fwd, w_rev) = sample.weights(pl);
    let fwd_ok = fades.desired_fwd > beta1 * interference(&w_fwd, &fades.fwd_interferers);
    let fb_ok = fades.desired_fb > beta3 * interference(&w_rev, &fades.fb_interferers);
    BeamformingOutcome {
        fwd_ok,
        fb_ok,
        joint_ok: fwd_ok && fb_ok,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamformingEstimate {
    pub joint: TrialEstimate,
    pub fwd: TrialEstimate,
    pub fb: TrialEstimate,
}

#[allow(clippy::too_many_arguments)]
pub fn estimate_beamforming_success(
    lambda: f64,
    n_antennas: u32,
    model: GainModel,
    beta1: f64,
    beta3: f64,
    plan: &TrialPlan,
    region: &SimRegion,
    pl: &PathLoss,
    par: Parallelism,
) -> BeamformingEstimate {
    let counts = run_trials(plan, par, |rng| {
        let sample = sample_interferer_pairs(lambda, region, pl, rng);
        let fades = BeamformingFades::draw(n_antennas, model, sample.len(), rng);
        let out = beamforming_trial(&sample, &fades, beta1, beta3, pl);
        [out.joint_ok as u64, out.fwd_ok as u64, out.fb_ok as u64]
    });
    let sums = counts.into_iter().fold([0u64; 3], |mut acc, c| {
        for (a, b) in acc.iter_mut().zip(c) {
            *a += b;
        }
        acc
    });
    let n = plan.n_trials();
    BeamformingEstimate {
        joint: TrialEstimate::from_counts(sums[0], n),
        fwd: TrialEstimate::from_counts(sums[1], n),
        fb: TrialEstimate::from_counts(sums[2], n),
    }
}
