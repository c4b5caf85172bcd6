use super::sampling::{BandFades, PairSample};
use crate::analytic::{PathLoss, SirThresholds};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub fwd_ok: bool,
    pub rev_ok: bool,
    pub joint_ok: bool,
}

pub(crate) fn interference(weights: &[f64], fades: &[f64]) -> f64 {
    weights.iter().zip(fades).map(|(w, f)| w * f).sum()
}

/// Evaluates both directions of the typical link for one realization.
///
/// The forward link succeeds iff `|h0|^2 > beta1 * sum_n d_Tn^-alpha |h0n|^2`,
/// which is `SIR_TR > beta1 / d^alpha`; likewise for the reverse link with
/// `beta2` and the receiver-side distances.
pub fn joint_success_trial(
    sample: &PairSample,
    fwd: &BandFades,
    rev: &BandFades,
    th: &SirThresholds,
    pl: &PathLoss,
) -> TrialOutcome {
    assert_eq!(sample.len(), fwd.interferers.len(), "forward fades per interferer");
    assert_eq!(sample.len(), rev.interferers.len(), "reverse fades per interferer");
    let (w_fwd, w_rev) = sample.weights(pl);
    let fwd_ok = fwd.desired > th.beta1() * interference(&w_fwd, &fwd.interferers);
    let rev_ok = rev.desired > th.beta2() * interference(&w_rev, &rev.interferers);
    TrialOutcome {
        fwd_ok,
        rev_ok,
        joint_ok: fwd_ok && rev_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::sir_threshold;

    fn pl() -> PathLoss {
        PathLoss::new(4.0, 5.0).unwrap()
    }

    /// One interfering pair 10 m from both Rx0 (origin) and Tx0 (5, 0).
    fn single_pair() -> PairSample {
        let y = (100.0f64 - 6.25).sqrt();
        PairSample::new(vec![[2.5, y]], vec![[7.5, y]], &pl()).unwrap()
    }

    #[test]
    fn no_interferers_always_succeed() {
        let th = SirThresholds::new(1e6, 1e6, 4.0).unwrap();
        let empty = PairSample::default();
        let out = joint_success_trial(&empty, &BandFades::unit(0), &BandFades::unit(0), &th, &pl());
        assert_eq!(out, TrialOutcome { fwd_ok: true, rev_ok: true, joint_ok: true });
    }

    #[test]
    fn zero_thresholds_always_succeed() {
        let th = SirThresholds::new(0.0, 0.0, 4.0).unwrap();
        let s = single_pair();
        let out = joint_success_trial(&s, &BandFades::unit(1), &BandFades::unit(1), &th, &pl());
        assert!(out.joint_ok);
    }

    #[test]
    fn hand_computed_sir_of_sixteen() {
        // SIR = 5^-4 / 10^-4 = 16 in both directions.
        let s = single_pair();
        let p = pl();
        for (spectral, expect) in [(15.9f64, true), (16.1, false)] {
            // b/f chosen so that 2^(b/f) - 1 = spectral
            let beta = sir_threshold((1.0 + spectral).log2(), 1.0, &p).unwrap();
            let th = SirThresholds::new(beta, beta, 4.0).unwrap();
            let out = joint_success_trial(&s, &BandFades::unit(1), &BandFades::unit(1), &th, &p);
            assert_eq!(out, TrialOutcome { fwd_ok: expect, rev_ok: expect, joint_ok: expect });
        }
    }

    #[test]
    fn directions_are_evaluated_independently() {
        let s = single_pair();
        let p = pl();
        let strong = sir_threshold(5.0f64.log2(), 1.0, &p).unwrap(); // SIR target 4
        let weak = sir_threshold(100.0f64.log2(), 1.0, &p).unwrap(); // SIR target 99
        let th = SirThresholds::new(strong, weak, 4.0).unwrap();
        let out = joint_success_trial(&s, &BandFades::unit(1), &BandFades::unit(1), &th, &p);
        assert_eq!(out, TrialOutcome { fwd_ok: true, rev_ok: false, joint_ok: false });
    }
}
