use super::region::{run_trials, Parallelism, SimRegion, TrialPlan};
use super::sampling::{region_center, sample_interferer_pairs, BandFades};
use super::trial::joint_success_trial;
use crate::analytic::{PathLoss, SirThresholds};

const Z95: f64 = 1.96;

/// Proportion estimate with a normal-approximation 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialEstimate {
    pub p_hat: f64,
    pub ci_halfwidth: f64,
    pub n_effective: u64,
}

impl TrialEstimate {
    pub fn from_counts(successes: u64, n: u64) -> Self {
        assert!(n > 0 && successes <= n);
        let p_hat = successes as f64 / n as f64;
        Self {
            p_hat,
            ci_halfwidth: Z95 * (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
            n_effective: n,
        }
    }

    /// Standard error `ci_halfwidth / 1.96`.
    pub fn std_error(&self) -> f64 {
        self.ci_halfwidth / Z95
    }

    /// Standard error the estimate would have if the true probability were `p`.
    pub fn std_error_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.n_effective as f64).sqrt()
    }
}

/// Joint, forward and reverse success estimated from the same trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointEstimate {
    pub joint: TrialEstimate,
    pub fwd: TrialEstimate,
    pub rev: TrialEstimate,
    /// Trials where both directions failed.
    pub(crate) both_failed: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    joint: u64,
    fwd: u64,
    rev: u64,
}

impl Tally {
    fn add(self, o: Tally) -> Tally {
        Tally {
            joint: self.joint + o.joint,
            fwd: self.fwd + o.fwd,
            rev: self.rev + o.rev,
        }
    }
}

fn to_estimate(t: Tally, n: u64) -> JointEstimate {
    JointEstimate {
        joint: TrialEstimate::from_counts(t.joint, n),
        fwd: TrialEstimate::from_counts(t.fwd, n),
        rev: TrialEstimate::from_counts(t.rev, n),
        both_failed: n - (t.fwd + t.rev - t.joint),
    }
}

/// Direct estimate of the success probabilities at intensity `lambda`.
pub fn estimate_joint_success(
    lambda: f64,
    th: &SirThresholds,
    plan: &TrialPlan,
    region: &SimRegion,
    pl: &PathLoss,
    par: Parallelism,
) -> JointEstimate {
    let tallies = run_trials(plan, par, |rng| {
        let sample = sample_interferer_pairs(lambda, region, pl, rng);
        let fwd = BandFades::draw(sample.len(), rng);
        let rev = BandFades::draw(sample.len(), rng);
        let out = joint_success_trial(&sample, &fwd, &rev, th, pl);
        Tally {
            joint: out.joint_ok as u64,
            fwd: out.fwd_ok as u64,
            rev: out.rev_ok as u64,
        }
    });
    let total = tallies.into_iter().fold(Tally::default(), Tally::add);
    to_estimate(total, plan.n_trials())
}

/// Positive-association gap `P(fwd and rev) - P(fwd) P(rev)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub p_joint: f64,
    pub p_product: f64,
    pub gap: f64,
    /// Delta-method standard error of `gap`.
    pub std_error: f64,
    pub estimate: JointEstimate,
}

impl CorrelationReport {
    pub fn from_estimate(est: JointEstimate) -> Self {
        let n = est.joint.n_effective as f64;
        let (pa, pb) = (est.fwd.p_hat, est.rev.p_hat);
        let p11 = est.joint.p_hat;
        let p10 = pa - p11;
        let p01 = pb - p11;
        let p00 = est.both_failed as f64 / n;
        // Influence function of p11 - pa pb on each outcome cell.
        let cells = [
            (p11, 1.0 - pa - pb),
            (p10, -pb),
            (p01, -pa),
            (p00, 0.0),
        ];
        let mean: f64 = cells.iter().map(|(w, v)| w * v).sum();
        let var: f64 = cells.iter().map(|(w, v)| w * (v - mean).powi(2)).sum();
        Self {
            p_joint: p11,
            p_product: pa * pb,
            gap: p11 - pa * pb,
            std_error: (var.max(0.0) / n).sqrt(),
            estimate: est,
        }
    }
}

pub fn correlation_diagnostic(
    lambda: f64,
    th: &SirThresholds,
    plan: &TrialPlan,
    region: &SimRegion,
    pl: &PathLoss,
    par: Parallelism,
) -> CorrelationReport {
    CorrelationReport::from_estimate(estimate_joint_success(lambda, th, plan, region, pl, par))
}

/// Joint success on a region and on the region with twice the radius,
/// evaluated on the same realizations (the inner process is the outer one
/// restricted to the smaller disk).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationCheck {
    pub p_inner: f64,
    pub p_outer: f64,
    pub shift: f64,
}

pub fn region_doubling_shift(
    lambda: f64,
    th: &SirThresholds,
    plan: &TrialPlan,
    region: &SimRegion,
    pl: &PathLoss,
    par: Parallelism,
) -> TruncationCheck {
    let outer = region.doubled();
    let center = region_center(pl);
    let counts = run_trials(plan, par, |rng| {
        let sample = sample_interferer_pairs(lambda, &outer, pl, rng);
        let fwd = BandFades::draw(sample.len(), rng);
        let rev = BandFades::draw(sample.len(), rng);
        let out_all = joint_success_trial(&sample, &fwd, &rev, th, pl);
        let (inner, keep) = sample.retain_within(center, region.radius());
        let pick = |b: &BandFades| BandFades {
            desired: b.desired,
            interferers: b
                .interferers
                .iter()
                .zip(&keep)
                .filter(|(_, k)| **k)
                .map(|(f, _)| *f)
                .collect(),
        };
        let out_inner = joint_success_trial(&inner, &pick(&fwd), &pick(&rev), th, pl);
        (out_inner.joint_ok as u64, out_all.joint_ok as u64)
    });
    let (a, b) = counts
        .into_iter()
        .fold((0u64, 0u64), |acc, (x, y)| (acc.0 + x, acc.1 + y));
    let n = plan.n_trials() as f64;
    let (p_inner, p_outer) = (a as f64 / n, b as f64 / n);
    TruncationCheck {
        p_inner,
        p_outer,
        shift: (p_inner - p_outer).abs(),
    }
}
