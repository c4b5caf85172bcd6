use approx::assert_relative_eq;
use proptest::prelude::*;
use twoway_tc::analytic::*;

fn thresholds() -> impl Strategy<Value = SirThresholds> {
    (2.05f64..16.0, 0.0f64..50.0, 0.0f64..50.0).prop_filter_map("both zero", |(a, b1, b2)| {
        SirThresholds::new(b1, b2, a).ok().filter(|_| b1 + b2 > 0.0)
    })
}

#[test]
fn constant_ratio_on_a_grid() {
    for k in 1..=140 {
        let alpha = 2.0 + 0.1 * k as f64;
        let ratio = interference_constant_upper(alpha).unwrap() / interference_constant_lower(alpha).unwrap();
        assert!((ratio - (0.5 + 1.0 / alpha)).abs() < 1e-12, "alpha {alpha}");
    }
}

#[test]
fn capacity_vanishes_at_the_ends_and_peaks_inside() {
    let pl = PathLoss::new(4.0, 5.0).unwrap();
    let traffic = TrafficSpec::new(1028.0, 30.0).unwrap();
    let split = BandwidthSplit::new(1e6, 0.99e6).unwrap();
    let grid: Vec<f64> = (1..1000).map(|k| k as f64 / 1000.0).collect();
    let tcs: Vec<CapacityInterval> = grid
        .iter()
        .map(|&e| tc_interval(&OutageTarget::new(e).unwrap(), &traffic, &split, &pl).unwrap())
        .collect();
    assert!(tcs.iter().all(|t| t.lower > 0.0 && t.upper > t.lower));
    for pick in [|t: &CapacityInterval| t.lower, |t: &CapacityInterval| t.upper] {
        let vals: Vec<f64> = tcs.iter().map(pick).collect();
        let peak = vals.iter().cloned().fold(0.0, f64::max);
        let arg = vals.iter().position(|&v| v == peak).unwrap();
        assert!(arg > 0 && arg < vals.len() - 1);
        for eps in [1e-9, 1.0 - 1e-9] {
            let t = tc_interval(&OutageTarget::new(eps).unwrap(), &traffic, &split, &pl).unwrap();
            assert!(pick(&t) < 1e-6 * peak);
        }
    }
}

proptest! {
    #[test]
    fn lower_never_exceeds_upper(th in thresholds(), lambda in 0.0f64..1.0) {
        let nd = NetworkDensity::new(lambda).unwrap();
        prop_assert!(joint_success_lower(&nd, &th) <= joint_success_upper(&nd, &th));
    }

    #[test]
    fn bounds_decrease_in_every_argument(
        th in thresholds(),
        lambda in 1e-6f64..1e-2,
        bump in 1.01f64..3.0,
    ) {
        let nd = NetworkDensity::new(lambda).unwrap();
        let denser = NetworkDensity::new(lambda * bump).unwrap();
        let a = th.alpha();
        let up1 = SirThresholds::new(th.beta1() * bump + 1e-6, th.beta2(), a).unwrap();
        let up2 = SirThresholds::new(th.beta1(), th.beta2() * bump + 1e-6, a).unwrap();
        for f in [joint_success_lower, joint_success_upper] {
            let base = f(&nd, &th);
            prop_assert!(f(&denser, &th) < base);
            prop_assert!(f(&nd, &up1) < base);
            prop_assert!(f(&nd, &up2) < base);
        }
    }

    #[test]
    fn threshold_increases_with_bits_and_decreases_with_band(
        alpha in 2.05f64..8.0,
        d in 0.5f64..20.0,
        b in 1.0f64..1e4,
        f in 1e3f64..1e7,
        bump in 1.01f64..2.0,
    ) {
        let pl = PathLoss::new(alpha, d).unwrap();
        let base = sir_threshold(b, f, &pl).unwrap();
        prop_assert!(sir_threshold(b * bump, f, &pl).unwrap() > base);
        prop_assert!(sir_threshold(b, f * bump, &pl).unwrap() < base);
    }

    #[test]
    fn density_round_trip(th in thresholds(), eps in 1e-4f64..0.9999) {
        let ot = OutageTarget::new(eps).unwrap();
        let di = density_interval_at_outage(&ot, &th).unwrap();
        let lo = NetworkDensity::new(di.lower).unwrap();
        let hi = NetworkDensity::new(di.upper).unwrap();
        prop_assert!((joint_success_lower(&lo, &th) - (1.0 - eps)).abs() < 1e-12);
        prop_assert!((joint_success_upper(&hi, &th) - (1.0 - eps)).abs() < 1e-12);
        prop_assert!(di.lower <= di.upper);
    }

    #[test]
    fn capacity_interval_ratio_is_the_constant_ratio(
        alpha in 2.05f64..16.0,
        eps in 0.01f64..0.99,
        b_tr in 10.0f64..1e4,
        b_rt in 1.0f64..1e4,
        share in 0.05f64..0.95,
    ) {
        let pl = PathLoss::new(alpha, 5.0).unwrap();
        let traffic = TrafficSpec::new(b_tr, b_rt).unwrap();
        let split = BandwidthSplit::new(1e6, share * 1e6).unwrap();
        let tc = tc_interval(&OutageTarget::new(eps).unwrap(), &traffic, &split, &pl).unwrap();
        assert_relative_eq!(tc.ratio(), 1.0 / (0.5 + 1.0 / alpha), max_relative = 1e-12);
    }
}
