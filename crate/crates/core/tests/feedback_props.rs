use approx::assert_relative_eq;
use proptest::prelude::*;
use twoway_tc::analytic::*;
use twoway_tc::feedback::*;

fn fig5() -> (PathLoss, TrafficSpec, BandwidthSplit, AntennaConfig) {
    (
        PathLoss::new(4.0, 5.0).unwrap(),
        TrafficSpec::new(1024.0, 56.0).unwrap(),
        BandwidthSplit::new(1e6, 0.94e6).unwrap(),
        AntennaConfig::new(3).unwrap(),
    )
}

#[test]
fn single_antenna_constant_is_the_one_way_constant() {
    for alpha in [2.5, 3.0, 4.0, 6.0] {
        let c4 = beamforming_constant(&AntennaConfig::new(1).unwrap(), alpha, C4Convention::Product).unwrap();
        assert_relative_eq!(c4, interference_constant_lower(alpha).unwrap(), max_relative = 1e-10);
    }
}

#[test]
fn literal_convention_is_the_reciprocal() {
    for n in 1..6 {
        let ac = AntennaConfig::new(n).unwrap();
        let p = beamforming_constant(&ac, 4.0, C4Convention::Product).unwrap();
        let l = beamforming_constant(&ac, 4.0, C4Convention::Reciprocal).unwrap();
        assert_relative_eq!(p * l, 1.0, max_relative = 1e-14);
    }
}

#[test]
fn genie_matches_the_one_way_beamforming_form() {
    let (pl, traffic, split, ac) = fig5();
    let ot = OutageTarget::new(0.1).unwrap();
    let c4 = beamforming_constant(&ac, 4.0, C4Convention::Product).unwrap();
    let beta1 = sir_threshold(1024.0, 0.94e6, &pl).unwrap();
    let expected = 0.1 * 0.9 * 3f64.sqrt() / (c4 * beta1.sqrt()) * 1024.0 / 1e6;
    let genie = genie_tc(&ot, &traffic, &split, &ac, &pl, C4Convention::Product).unwrap();
    assert_relative_eq!(genie, expected, max_relative = 1e-12);
}

#[test]
fn pinned_feedback_reduces_to_the_genie_success() {
    // With no feedback constraint and no quantization loss the success bound
    // hits 1 - eps exactly at the genie density.
    let (pl, traffic, split, ac) = fig5();
    let ot = OutageTarget::new(0.1).unwrap();
    let beta1 = sir_threshold(1024.0, 0.94e6, &pl).unwrap();
    let genie = genie_tc(&ot, &traffic, &split, &ac, &pl, C4Convention::Product).unwrap();
    let lambda = genie / (0.9 * 1024.0 / 1e6);
    let nd = NetworkDensity::new(lambda).unwrap();
    let s = feedback_success_lower(&nd, beta1, 0.0, 1.0, &ac, 4.0, C4Convention::Product).unwrap();
    assert_relative_eq!(s.value, 0.9, max_relative = 1e-12);
}

#[test]
fn bound_eventually_decreases_in_feedback_bits() {
    let (pl, traffic, split, ac) = fig5();
    let ot = OutageTarget::new(0.1).unwrap();
    for form in [Beta3Form::Verbatim, Beta3Form::MinusOne] {
        let opts = FeedbackOptions { beta3: form, ..Default::default() };
        let tc: Vec<f64> = (0..24)
            .map(|k| {
                let fs = FeedbackSpec::with_default_c3(1 << k).unwrap();
                feedback_tc_lower(&ot, &traffic, &split, &fs, &ac, &pl, opts).unwrap().tc_lower
            })
            .collect();
        let peak = tc.iter().cloned().fold(0.0, f64::max);
        let last = tc[tc.len() - 1];
        assert!(last < 0.5 * peak, "{form:?}: {last} vs {peak}");
        assert!(tc.windows(2).rev().take(3).all(|w| w[1] < w[0]));
    }
}

#[test]
fn clamping_is_reported() {
    let ac = AntennaConfig::new(3).unwrap();
    let nd = NetworkDensity::new(1.0).unwrap();
    let s = feedback_success_lower(&nd, 1.0, 1.0, 0.5, &ac, 4.0, C4Convention::Product).unwrap();
    assert_eq!(s, SuccessBound { value: 0.0, clamped: true });
    let zero = NetworkDensity::new(0.0).unwrap();
    let s = feedback_success_lower(&zero, 1.0, 1.0, 0.5, &ac, 4.0, C4Convention::Product).unwrap();
    assert_eq!(s, SuccessBound { value: 1.0, clamped: false });
}

proptest! {
    #[test]
    fn success_bound_is_monotone(
        lambda in 1e-7f64..1e-3,
        beta1 in 0.01f64..10.0,
        beta3 in 0.01f64..10.0,
        gamma in 0.05f64..0.95,
        bump in 1.01f64..2.0,
        n in 1u32..6,
    ) {
        let ac = AntennaConfig::new(n).unwrap();
        let nd = NetworkDensity::new(lambda).unwrap();
        let s = |b1: f64, b3: f64, g: f64| {
            feedback_success_lower(&nd, b1, b3, g, &ac, 4.0, C4Convention::Product).unwrap().value
        };
        let base = s(beta1, beta3, gamma);
        prop_assert!(s(beta1, beta3, (gamma * bump).min(1.0)) >= base);
        prop_assert!(s(beta1 * bump, beta3, gamma) <= base);
        prop_assert!(s(beta1, beta3 * bump, gamma) <= base);
        prop_assert!((0.0..=1.0).contains(&base));
    }

    #[test]
    fn genie_dominates_feedback(eps in 0.01f64..0.99, bits in 1u32..64, n in 1u32..6, share in 0.5f64..0.99) {
        let pl = PathLoss::new(4.0, 5.0).unwrap();
        let traffic = TrafficSpec::new(1024.0, 56.0).unwrap();
        let split = BandwidthSplit::new(1e6, share * 1e6).unwrap();
        let ac = AntennaConfig::new(n).unwrap();
        let ot = OutageTarget::new(eps).unwrap();
        let fs = FeedbackSpec::with_default_c3(bits).unwrap();
        for form in [Beta3Form::Verbatim, Beta3Form::MinusOne] {
            let opts = FeedbackOptions { beta3: form, ..Default::default() };
            let fb = feedback_tc_lower(&ot, &traffic, &split, &fs, &ac, &pl, opts).unwrap();
            let genie = genie_tc(&ot, &traffic, &split, &ac, &pl, opts.c4).unwrap();
            prop_assert!(fb.tc_lower <= genie);
            prop_assert!(fb.gamma > 0.0 && fb.gamma <= 1.0);
        }
    }
}
