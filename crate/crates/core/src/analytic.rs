//! Closed-form two-way capacity bounds.
//!
//! Every SIR threshold here carries the `d^alpha` factor of the pair distance,
//! so a threshold `beta` means success iff `|h|^2 > beta * I` where `I` is the
//! path-loss weighted interference power. With that normalization the
//! interference constants below need no separate `d^2` term.
//!
//! The joint success probability of a two-way link over a Poisson field of
//! intensity `lambda` satisfies
//!
//! ```text
//! exp(-lambda c1 S) <= P(success) <= exp(-lambda c2 S),   S = beta1^(2/alpha) + beta2^(2/alpha)
//! ```
//!
//! with the lower side from positive association of the two success events and
//! the upper side from Cauchy-Schwarz.

use std::f64::consts::{LN_2, PI};

use crate::error::{finite, invalid, Error, Result};

/// Smallest admissible distance of the path-loss exponent from 2.
pub const ALPHA_GUARD: f64 = 1e-9;

fn check_alpha(alpha: f64) -> Result<f64> {
    finite("alpha", alpha)?;
    if alpha < 2.0 + ALPHA_GUARD {
        return Err(invalid(
            "alpha",
            format!("path-loss exponent must exceed 2, got {alpha}"),
        ));
    }
    Ok(alpha)
}

/// Propagation environment: path-loss exponent and link length in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLoss {
    alpha: f64,
    d: f64,
}

impl PathLoss {
    pub fn new(alpha: f64, d: f64) -> Result<Self> {
        check_alpha(alpha)?;
        finite("d", d)?;
        if d <= 0.0 {
            return Err(invalid("d", format!("pair distance must be positive, got {d}")));
        }
        Ok(Self { alpha, d })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// `2 / alpha`.
    pub fn delta(&self) -> f64 {
        2.0 / self.alpha
    }

    /// `d^alpha`, the factor folded into every SIR threshold.
    pub fn d_pow_alpha(&self) -> f64 {
        self.d.powf(self.alpha)
    }
}

/// Rate demands in bits for the forward (Tx to Rx) and reverse directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficSpec {
    b_tr: f64,
    b_rt: f64,
}

impl TrafficSpec {
    pub fn new(b_tr: f64, b_rt: f64) -> Result<Self> {
        finite("b_tr", b_tr)?;
        finite("b_rt", b_rt)?;
        if b_tr <= 0.0 {
            return Err(invalid("b_tr", format!("forward demand must be positive, got {b_tr}")));
        }
        if b_rt < 0.0 {
            return Err(invalid("b_rt", format!("reverse demand must be non-negative, got {b_rt}")));
        }
        Ok(Self { b_tr, b_rt })
    }

    pub fn b_tr(&self) -> f64 {
        self.b_tr
    }

    pub fn b_rt(&self) -> f64 {
        self.b_rt
    }

    pub fn total(&self) -> f64 {
        self.b_tr + self.b_rt
    }
}

/// Partition of `f_total` Hz into a forward band `f_tr` and the reverse remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthSplit {
    f_total: f64,
    f_tr: f64,
}

impl BandwidthSplit {
    pub fn new(f_total: f64, f_tr: f64) -> Result<Self> {
        finite("f_total", f_total)?;
        finite("f_tr", f_tr)?;
        if f_total <= 0.0 {
            return Err(invalid("f_total", format!("must be positive, got {f_total}")));
        }
        if !(f_tr > 0.0 && f_tr < f_total) {
            return Err(invalid(
                "f_tr",
                format!("must lie strictly inside (0, {f_total}), got {f_tr}"),
            ));
        }
        Ok(Self { f_total, f_tr })
    }

    pub fn f_total(&self) -> f64 {
        self.f_total
    }

    pub fn f_tr(&self) -> f64 {
        self.f_tr
    }

    pub fn f_rt(&self) -> f64 {
        self.f_total - self.f_tr
    }
}

/// Intensity of active transmitters per square meter.
///
/// When built from a parent intensity and an Aloha access probability the
/// active intensity is their product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkDensity {
    lambda: f64,
    aloha: Option<(f64, f64)>,
}

impl NetworkDensity {
    pub fn new(lambda: f64) -> Result<Self> {
        finite("lambda", lambda)?;
        if lambda < 0.0 {
            return Err(invalid("lambda", format!("must be non-negative, got {lambda}")));
        }
        Ok(Self {
            lambda,
            aloha: None,
        })
    }

    pub fn from_aloha(lambda0: f64, p_a: f64) -> Result<Self> {
        finite("lambda0", lambda0)?;
        finite("p_a", p_a)?;
        if lambda0 < 0.0 {
            return Err(invalid("lambda0", format!("must be non-negative, got {lambda0}")));
        }
        if !(0.0..=1.0).contains(&p_a) {
            return Err(invalid("p_a", format!("must lie in [0, 1], got {p_a}")));
        }
        Ok(Self {
            lambda: p_a * lambda0,
            aloha: Some((lambda0, p_a)),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn lambda0(&self) -> Option<f64> {
        self.aloha.map(|(l0, _)| l0)
    }

    pub fn p_a(&self) -> Option<f64> {
        self.aloha.map(|(_, p)| p)
    }
}

/// Target outage probability, strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageTarget {
    eps: f64,
}

impl OutageTarget {
    pub fn new(eps: f64) -> Result<Self> {
        finite("eps", eps)?;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(invalid("eps", format!("must lie strictly inside (0, 1), got {eps}")));
        }
        Ok(Self { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn success(&self) -> f64 {
        1.0 - self.eps
    }

    /// `-ln(1 - eps)`, positive.
    pub fn neg_ln_success(&self) -> f64 {
        -(-self.eps).ln_1p()
    }
}

/// Forward and reverse SIR thresholds, each scaled by `d^alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirThresholds {
    beta1: f64,
    beta2: f64,
    alpha: f64,
}

impl SirThresholds {
    pub fn new(beta1: f64, beta2: f64, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        for (name, b) in [("beta1", beta1), ("beta2", beta2)] {
            if b.is_nan() || b < 0.0 {
                return Err(invalid(name, format!("must be non-negative, got {b}")));
            }
        }
        Ok(Self {
            beta1,
            beta2,
            alpha,
        })
    }

    /// Thresholds implied by sending `traffic` over `split`.
    pub fn from_traffic(
        traffic: &TrafficSpec,
        split: &BandwidthSplit,
        pl: &PathLoss,
    ) -> Result<Self> {
        let beta1 = sir_threshold(traffic.b_tr(), split.f_tr(), pl)?;
        let beta2 = sir_threshold(traffic.b_rt(), split.f_rt(), pl)?;
        Self::new(beta1, beta2, pl.alpha())
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        2.0 / self.alpha
    }

    /// `beta1^delta + beta2^delta`.
    pub fn interference_load(&self) -> f64 {
        let delta = self.delta();
        self.beta1.powf(delta) + self.beta2.powf(delta)
    }
}

/// Lower and upper two-way transmission capacity in bits/sec/Hz/m^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityInterval {
    pub lower: f64,
    pub upper: f64,
}

impl CapacityInterval {
    pub fn ratio(&self) -> f64 {
        self.upper / self.lower
    }
}

/// Active densities at which the lower and upper success bounds equal the target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityInterval {
    pub lower: f64,
    pub upper: f64,
}

/// `d^alpha (2^(b/f) - 1)`: the SIR threshold for `b` bits over `f` Hz.
pub fn sir_threshold(b: f64, f: f64, pl: &PathLoss) -> Result<f64> {
    finite("b", b)?;
    finite("f", f)?;
    if b < 0.0 {
        return Err(invalid("b", format!("rate demand must be non-negative, got {b}")));
    }
    if f <= 0.0 {
        return Err(invalid("f", format!("bandwidth must be positive, got {f}")));
    }
    Ok(pl.d_pow_alpha() * ((b / f) * LN_2).exp_m1())
}

/// `c1 = 2 pi^2 csc(2 pi / alpha) / alpha`.
pub fn interference_constant_lower(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(2.0 * PI * PI / ((2.0 * PI / alpha).sin() * alpha))
}

/// `c2 = pi^2 csc(2 pi / alpha) (alpha + 2) / alpha^2`; always `c1 (1/2 + 1/alpha)`.
pub fn interference_constant_upper(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(PI * PI * (alpha + 2.0) / ((2.0 * PI / alpha).sin() * alpha * alpha))
}

fn constants(alpha: f64) -> (f64, f64) {
    // alpha was validated when the thresholds were built.
    (
        interference_constant_lower(alpha).expect("validated alpha"),
        interference_constant_upper(alpha).expect("validated alpha"),
    )
}

/// Natural log of the lower joint success bound.
pub fn ln_joint_success_lower(nd: &NetworkDensity, th: &SirThresholds) -> f64 {
    let (c1, _) = constants(th.alpha());
    ln_success(nd.lambda(), c1, th.interference_load())
}

/// Natural log of the upper joint success bound.
pub fn ln_joint_success_upper(nd: &NetworkDensity, th: &SirThresholds) -> f64 {
    let (_, c2) = constants(th.alpha());
    ln_success(nd.lambda(), c2, th.interference_load())
}

fn ln_success(lambda: f64, c: f64, load: f64) -> f64 {
    if lambda == 0.0 || load == 0.0 {
        0.0
    } else {
        -lambda * c * load
    }
}

/// `exp(-lambda c1 (beta1^delta + beta2^delta))`.
pub fn joint_success_lower(nd: &NetworkDensity, th: &SirThresholds) -> f64 {
    ln_joint_success_lower(nd, th).exp()
}

/// `exp(-lambda c2 (beta1^delta + beta2^delta))`.
pub fn joint_success_upper(nd: &NetworkDensity, th: &SirThresholds) -> f64 {
    ln_joint_success_upper(nd, th).exp()
}

/// Exact single-direction success probability under Rayleigh fading,
/// `exp(-lambda c1 beta^delta)`.
pub fn one_way_success(nd: &NetworkDensity, beta: f64, alpha: f64) -> Result<f64> {
    if beta.is_nan() || beta < 0.0 {
        return Err(invalid("beta", format!("must be non-negative, got {beta}")));
    }
    let c1 = interference_constant_lower(alpha)?;
    Ok(ln_success(nd.lambda(), c1, beta.powf(2.0 / alpha)).exp())
}

/// Densities at which the lower and upper joint success bounds equal `1 - eps`.
pub fn density_interval_at_outage(ot: &OutageTarget, th: &SirThresholds) -> Result<DensityInterval> {
    let load = th.interference_load();
    if load == 0.0 {
        return Err(Error::UnboundedDensity);
    }
    let (c1, c2) = constants(th.alpha());
    let budget = ot.neg_ln_success();
    Ok(DensityInterval {
        lower: budget / (c1 * load),
        upper: budget / (c2 * load),
    })
}

/// Two-way transmission capacity interval for the given demands and split.
pub fn tc_interval(
    ot: &OutageTarget,
    traffic: &TrafficSpec,
    split: &BandwidthSplit,
    pl: &PathLoss,
) -> Result<CapacityInterval> {
    let th = SirThresholds::from_traffic(traffic, split, pl)?;
    tc_interval_for_thresholds(ot, &th, traffic.total() / split.f_total())
}

/// Capacity interval given precomputed thresholds and spectral efficiency
/// `(b_tr + b_rt) / f_total`.
pub fn tc_interval_for_thresholds(
    ot: &OutageTarget,
    th: &SirThresholds,
    spectral_efficiency: f64,
) -> Result<CapacityInterval> {
    let densities = density_interval_at_outage(ot, th)?;
    let scale = ot.success() * spectral_efficiency;
    Ok(CapacityInterval {
        lower: scale * densities.lower,
        upper: scale * densities.upper,
    })
}
