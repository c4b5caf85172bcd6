//! Two-way capacity lower bound for transmit beamforming with quantized
//! channel-direction feedback.
//!
//! An `N`-antenna transmitter beamforms toward its single-antenna receiver
//! using a codeword the receiver picked from a `2^B` entry codebook and sent
//! back over the reverse band. Quantization keeps a fraction
//! `gamma = 1 - c3 B^(-1/(N-1))` of the beamforming gain; the feedback message
//! itself must clear the threshold `beta3`. The success bound is
//!
//! ```text
//! P >= 1 - c4 lambda N^(-delta) [ (beta1/gamma)^delta + beta3^delta ]
//! ```

use std::f64::consts::{LN_2, PI};

use statrs::function::gamma::ln_gamma;

use crate::analytic::{sir_threshold, BandwidthSplit, NetworkDensity, OutageTarget, PathLoss, TrafficSpec};
use crate::error::{finite, invalid, Error, Result};

/// Default quantization-loss coefficient.
pub const DEFAULT_C3: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntennaConfig {
    n: u32,
}

impl AntennaConfig {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "at least one transmit antenna is required"));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

/// Feedback codeword size in bits and the quantization-loss coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackSpec {
    b_fb: u32,
    c3: f64,
}

impl FeedbackSpec {
    pub fn new(b_fb: u32, c3: f64) -> Result<Self> {
        if b_fb == 0 {
            return Err(invalid("b_fb", "at least one feedback bit is required"));
        }
        finite("c3", c3)?;
        if !(c3 > 0.0 && c3 <= 1.0) {
            return Err(invalid("c3", format!("must lie in (0, 1], got {c3}")));
        }
        Ok(Self { b_fb, c3 })
    }

    pub fn with_default_c3(b_fb: u32) -> Result<Self> {
        Self::new(b_fb, DEFAULT_C3)
    }

    pub fn b_fb(&self) -> u32 {
        self.b_fb
    }

    pub fn c3(&self) -> f64 {
        self.c3
    }
}

/// How the two bracketed factors of `c4` are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum C4Convention {
    /// Plain product. Reduces to `c1` for a single antenna.
    #[default]
    Product,
    /// Reciprocal of the product, as the closed form is typeset.
    Reciprocal,
}

/// Form of the feedback threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Beta3Form {
    /// `d^alpha 2^(B/F_RT)`.
    #[default]
    Verbatim,
    /// `d^alpha (2^(B/F_RT) - 1)`, matching the data thresholds.
    MinusOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FeedbackOptions {
    pub c4: C4Convention,
    pub beta3: Beta3Form,
}

/// A success probability bound together with whether it was clamped into [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessBound {
    pub value: f64,
    pub clamped: bool,
}

/// Result of the capacity bound with the intermediate constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackBound {
    pub gamma: f64,
    pub beta1: f64,
    pub beta3: f64,
    pub c4: f64,
    pub tc_lower: f64,
}

/// Signal-power retention `gamma = 1 - c3 (1/B)^(1/(N-1))`; 1 for a single antenna.
pub fn quantization_gain(fs: &FeedbackSpec, ac: &AntennaConfig) -> Result<f64> {
    if ac.n() == 1 {
        return Ok(1.0);
    }
    let loss = fs.c3() * (-(fs.b_fb() as f64).ln() / (ac.n() - 1) as f64).exp();
    let gamma = 1.0 - loss;
    if gamma <= 0.0 {
        return Err(Error::VacuousGain { gamma });
    }
    Ok(gamma)
}

/// The beamforming interference constant `c4(N, alpha)`.
///
/// The first factor is `1 + sum_{k=0}^{N-2} prod_{l=0}^{k} (l - delta) / (k+1)!`,
/// the second `(2 pi / alpha) sum_{k=0}^{N-1} C(N, k) B(delta + k, N - delta + k)`.
pub fn beamforming_constant(ac: &AntennaConfig, alpha: f64, convention: C4Convention) -> Result<f64> {
    // Shares the exponent validation with the single-antenna constants.
    PathLoss::new(alpha, 1.0)?;
    let n = ac.n() as usize;
    let delta = 2.0 / alpha;

    let mut first = 1.0;
    let mut term = 1.0;
    for k in 0..n.saturating_sub(1) {
        term *= (k as f64 - delta) / (k + 1) as f64;
        first += term;
    }

    let nf = n as f64;
    let ln_n_fact = ln_gamma(nf + 1.0);
    let second: f64 = (0..n)
        .map(|k| {
            let kf = k as f64;
            let ln_choose = ln_n_fact - ln_gamma(kf + 1.0) - ln_gamma(nf - kf + 1.0);
            let (a, b) = (delta + kf, nf - delta + kf);
            let ln_beta = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
            (ln_choose + ln_beta).exp()
        })
        .sum::<f64>()
        * 2.0
        * PI
        / alpha;

    let product = first * second;
    Ok(match convention {
        C4Convention::Product => product,
        C4Convention::Reciprocal => 1.0 / product,
    })
}

/// SIR threshold of the `B`-bit feedback message over `f_rt` Hz.
pub fn feedback_threshold(fs: &FeedbackSpec, f_rt: f64, pl: &PathLoss, form: Beta3Form) -> Result<f64> {
    finite("f_rt", f_rt)?;
    if f_rt <= 0.0 {
        return Err(invalid("f_rt", format!("must be positive, got {f_rt}")));
    }
    let b = fs.b_fb() as f64;
    match form {
        Beta3Form::Verbatim => Ok(pl.d_pow_alpha() * (b / f_rt * LN_2).exp()),
        Beta3Form::MinusOne => sir_threshold(b, f_rt, pl),
    }
}

fn beamformed_load(beta1: f64, beta3: f64, gamma: f64, delta: f64) -> f64 {
    (beta1 / gamma).powf(delta) + beta3.powf(delta)
}

/// `1 - c4 lambda N^(-delta) [(beta1/gamma)^delta + beta3^delta]`, clamped at 0.
pub fn feedback_success_lower(
    nd: &NetworkDensity,
    beta1: f64,
    beta3: f64,
    gamma: f64,
    ac: &AntennaConfig,
    alpha: f64,
    convention: C4Convention,
) -> Result<SuccessBound> {
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(Error::VacuousGain { gamma });
    }
    for (name, b) in [("beta1", beta1), ("beta3", beta3)] {
        if b.is_nan() || b < 0.0 {
            return Err(invalid(name, format!("must be non-negative, got {b}")));
        }
    }
    let c4 = beamforming_constant(ac, alpha, convention)?;
    let delta = 2.0 / alpha;
    let raw = 1.0
        - c4 * nd.lambda() * (ac.n() as f64).powf(-delta) * beamformed_load(beta1, beta3, gamma, delta);
    Ok(SuccessBound {
        value: raw.clamp(0.0, 1.0),
        clamped: raw < 0.0,
    })
}

/// Lower bound on the two-way capacity with limited-feedback beamforming,
/// `(1-eps) eps N^delta / (c4 [(beta1/gamma)^delta + beta3^delta]) * b_tr / f_total`.
pub fn feedback_tc_lower(
    ot: &OutageTarget,
    traffic: &TrafficSpec,
    split: &BandwidthSplit,
    fs: &FeedbackSpec,
    ac: &AntennaConfig,
    pl: &PathLoss,
    opts: FeedbackOptions,
) -> Result<FeedbackBound> {
    let gamma = quantization_gain(fs, ac)?;
    let beta1 = sir_threshold(traffic.b_tr(), split.f_tr(), pl)?;
    let beta3 = feedback_threshold(fs, split.f_rt(), pl, opts.beta3)?;
    let c4 = beamforming_constant(ac, pl.alpha(), opts.c4)?;
    let load = beamformed_load(beta1, beta3, gamma, pl.delta());
    let tc_lower = capacity_from_load(ot, ac, pl, c4, load) * traffic.b_tr() / split.f_total();
    Ok(FeedbackBound {
        gamma,
        beta1,
        beta3,
        c4,
        tc_lower,
    })
}

fn capacity_from_load(ot: &OutageTarget, ac: &AntennaConfig, pl: &PathLoss, c4: f64, load: f64) -> f64 {
    let eps = ot.eps();
    (1.0 - eps) * eps * (ac.n() as f64).powf(pl.delta()) / (c4 * load)
}

/// Genie-aided one-way beamforming capacity on the same forward band: no
/// quantization loss and no feedback constraint.
pub fn genie_tc(
    ot: &OutageTarget,
    traffic: &TrafficSpec,
    split: &BandwidthSplit,
    ac: &AntennaConfig,
    pl: &PathLoss,
    convention: C4Convention,
) -> Result<f64> {
    let beta1 = sir_threshold(traffic.b_tr(), split.f_tr(), pl)?;
    if beta1 == 0.0 {
        return Err(Error::UnboundedDensity);
    }
    let c4 = beamforming_constant(ac, pl.alpha(), convention)?;
    Ok(capacity_from_load(ot, ac, pl, c4, beta1.powf(pl.delta())) * traffic.b_tr() / split.f_total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn antennas(n: u32) -> AntennaConfig {
        AntennaConfig::new(n).unwrap()
    }

    #[test]
    fn gain_examples() {
        let fs = FeedbackSpec::new(4, 1.0).unwrap();
        assert_relative_eq!(quantization_gain(&fs, &antennas(2)).unwrap(), 0.75, max_relative = 1e-15);
        let fs = FeedbackSpec::new(2, 1.0).unwrap();
        assert_relative_eq!(
            quantization_gain(&fs, &antennas(3)).unwrap(),
            1.0 - 0.5f64.sqrt(),
            max_relative = 1e-15
        );
        assert_eq!(quantization_gain(&fs, &antennas(1)).unwrap(), 1.0);
        let big = FeedbackSpec::new(u32::MAX, 0.5).unwrap();
        assert!(quantization_gain(&big, &antennas(2)).unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn vacuous_gain_is_reported() {
        let fs = FeedbackSpec::new(1, 1.0).unwrap();
        assert!(matches!(
            quantization_gain(&fs, &antennas(3)),
            Err(Error::VacuousGain { .. })
        ));
    }

    #[test]
    fn spec_invariants() {
        assert!(FeedbackSpec::new(0, 0.5).is_err());
        assert!(FeedbackSpec::new(2, 0.0).is_err());
        assert!(FeedbackSpec::new(2, 1.5).is_err());
        assert!(FeedbackSpec::new(2, 1.0).is_ok());
        assert!(AntennaConfig::new(0).is_err());
    }

    #[test]
    fn c4_reference_values() {
        // 40-digit evaluation of both factors.
        for (n, alpha, expected) in [
            (2, 4.0, 1.542_125_687_670_212_3),
            (3, 4.0, 0.948_768_733_625_228_3),
            (2, 3.0, 1.094_308_129_063_056),
            (3, 3.0, 0.548_119_062_881_671_8),
        ] {
            let c4 = beamforming_constant(&antennas(n), alpha, C4Convention::Product).unwrap();
            assert_relative_eq!(c4, expected, max_relative = 1e-12);
            let lit = beamforming_constant(&antennas(n), alpha, C4Convention::Reciprocal).unwrap();
            assert_relative_eq!(lit * c4, 1.0, max_relative = 1e-14);
        }
        assert!(beamforming_constant(&antennas(2), 2.0, C4Convention::Product).is_err());
        assert!(beamforming_constant(&antennas(200), 4.0, C4Convention::Product).unwrap().is_finite());
    }

    #[test]
    fn threshold_examples() {
        let pl = PathLoss::new(4.0, 5.0).unwrap();
        let fs = FeedbackSpec::new(2, 0.5).unwrap();
        assert_relative_eq!(
            feedback_threshold(&fs, 0.06e6, &pl, Beta3Form::Verbatim).unwrap(),
            625.014_440_733_086_9,
            max_relative = 1e-13
        );
        let unit = PathLoss::new(4.0, 1.0).unwrap();
        let fs = FeedbackSpec::new(3, 0.5).unwrap();
        assert_relative_eq!(feedback_threshold(&fs, 3.0, &unit, Beta3Form::Verbatim).unwrap(), 2.0);
        assert_relative_eq!(feedback_threshold(&fs, 3.0, &unit, Beta3Form::MinusOne).unwrap(), 1.0);
        // B / F_RT -> 0
        let v = feedback_threshold(&fs, 1e15, &pl, Beta3Form::Verbatim).unwrap();
        assert_relative_eq!(v, 625.0, max_relative = 1e-12);
        assert!(feedback_threshold(&fs, 1e15, &pl, Beta3Form::MinusOne).unwrap() < 1e-9);
        assert!(feedback_threshold(&fs, 0.0, &pl, Beta3Form::Verbatim).is_err());
    }

    #[test]
    fn success_bound_edges() {
        let ac = antennas(3);
        let zero = NetworkDensity::new(0.0).unwrap();
        let b = feedback_success_lower(&zero, 1.0, 625.0, 0.6, &ac, 4.0, C4Convention::Product).unwrap();
        assert_eq!(b, SuccessBound { value: 1.0, clamped: false });
        let dense = NetworkDensity::new(10.0).unwrap();
        let b = feedback_success_lower(&dense, 1.0, 625.0, 0.6, &ac, 4.0, C4Convention::Product).unwrap();
        assert_eq!(b.value, 0.0);
        assert!(b.clamped);
        assert!(feedback_success_lower(&zero, 1.0, 1.0, 0.0, &ac, 4.0, C4Convention::Product).is_err());
    }

    #[test]
    fn single_antenna_matches_first_order_one_way() {
        let c1 = crate::analytic::interference_constant_lower(4.0).unwrap();
        let nd = NetworkDensity::new(1e-7).unwrap();
        let beta = 0.45;
        let b = feedback_success_lower(&nd, beta, 0.0, 1.0, &antennas(1), 4.0, C4Convention::Product).unwrap();
        let exact = crate::analytic::one_way_success(&nd, beta, 4.0).unwrap();
        assert_relative_eq!(b.value, 1.0 - c1 * 1e-7 * beta.sqrt(), max_relative = 1e-14);
        // Agreement to second order in lambda.
        assert!((b.value - exact).abs() < 1e-12);
    }
}
