use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use covert_core::channel::NetworkGeometry;
use covert_core::detection::{
    detection_error_sum, detection_params, gamma_pdf, mc_detection, min_detection_error,
    optimal_excess, optimal_threshold, p_fa, p_md, DetectionParams, Hypothesis, McDetectionConfig,
    SlotModel,
};

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn params(phi0: f64, phi1: f64) -> DetectionParams {
    DetectionParams::new(phi0, phi1, 0.5).unwrap()
}

#[test]
fn transmitting_density_integrates_to_one() {
    for (phi0, phi1) in [(1.0, 2.0), (0.3, 0.05), (2.0, 2.0 + 1e-12), (5.0, 40.0)] {
        let p = params(phi0, phi1);
        let upper = 60.0 * phi0.max(phi1);
        let mass = simpson(
            |g| gamma_pdf(g, &p, Hypothesis::Transmitting).unwrap(),
            0.0,
            upper,
            200_000,
        );
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-8);
    }
}

#[test]
fn transmitting_density_matches_numeric_convolution() {
    let p = params(0.7, 1.9);
    let exp_pdf = |x: f64, phi: f64| (-x / phi).exp() / phi;
    for k in 1..=20 {
        let g = 0.25 * k as f64;
        let conv = simpson(
            |x| exp_pdf(x, p.phi0) * exp_pdf(g - x, p.phi1),
            0.0,
            g,
            20_000,
        );
        let closed = gamma_pdf(g, &p, Hypothesis::Transmitting).unwrap();
        assert_abs_diff_eq!(closed, conv, epsilon = 1e-6);
    }
}

#[test]
fn missed_detection_is_integral_of_density() {
    let p = params(1.3, 0.4);
    for v in [0.6, 1.0, 2.5, 6.0] {
        let cdf = simpson(
            |g| gamma_pdf(g, &p, Hypothesis::Transmitting).unwrap(),
            0.0,
            v - p.sigma_e2,
            100_000,
        );
        assert_abs_diff_eq!(p_md(v, &p), cdf, epsilon = 1e-10);
    }
}

#[test]
fn min_error_matches_textbook_closed_form() {
    // e^{-phi1 A / (phi1 - phi0)} + Lambda_2 with A = ln(phi1 / phi0)
    let textbook = |phi0: f64, phi1: f64| {
        let a = (phi1 / phi0).ln();
        let d = phi1 - phi0;
        let lambda2 = (phi1 * (-phi0 / d * a).exp() - phi0 * (-phi1 / d * a).exp() + phi0 - phi1)
            / (phi0 - phi1);
        (-phi1 * a / d).exp() + lambda2
    };
    for (phi0, phi1) in [(1.0, 2.0), (2.0, 1.0), (0.1, 0.5), (3.0, 0.7), (1.0, 1.2)] {
        let ours = min_detection_error(&params(phi0, phi1)).unwrap();
        assert_abs_diff_eq!(ours, textbook(phi0, phi1), epsilon = 1e-12);
    }
}

#[test]
fn min_error_frozen_values() {
    // 1 - r^{1/(1-r)} with r = phi1 / phi0, evaluated at 40 digits
    assert_abs_diff_eq!(
        min_detection_error(&params(1.0, 10.0)).unwrap(),
        0.225736317318873,
        epsilon = 1e-14
    );
    assert_abs_diff_eq!(
        min_detection_error(&params(2.0, 1.0)).unwrap(),
        0.75,
        epsilon = 1e-14
    );
    // equal scales: limit 1 - e^{-1}
    assert_abs_diff_eq!(
        min_detection_error(&params(1.0, 1.0)).unwrap(),
        0.6321205588285577,
        epsilon = 1e-14
    );
}

#[test]
fn finite_slots_approach_asymptotic_model() {
    let g = NetworkGeometry::new(4.0, 6.0, 5.0, 3.0, 2.5).unwrap();
    let dp = detection_params(0.3, 2.0, &g, 0.05).unwrap();
    let v = optimal_threshold(&dp).unwrap();
    let run = |slots| {
        let mut cfg = McDetectionConfig::new(0.3, 2.0, g, 0.05, v);
        cfg.n_trials = 20_000;
        cfg.slots = slots;
        mc_detection(&mut ChaCha8Rng::seed_from_u64(3), &cfg).unwrap()
    };
    let asym = run(SlotModel::Asymptotic);
    let finite = run(SlotModel::Finite(10_000));
    assert!((asym.p_fa_hat - finite.p_fa_hat).abs() < 0.01);
    assert!((asym.p_md_hat - finite.p_md_hat).abs() < 0.01);
    assert_abs_diff_eq!(asym.p_fa_hat, p_fa(v, &dp), epsilon = 0.02);
}

fn scale() -> impl Strategy<Value = f64> {
    (-4.0f64..4.0).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #[test]
    fn probabilities_are_bounded_and_monotone(
        phi0 in scale(), phi1 in scale(), sigma in 1e-3f64..10.0,
        a in 0.0f64..50.0, b in 0.0f64..50.0,
    ) {
        let p = DetectionParams::new(phi0, phi1, sigma).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (v_lo, v_hi) = (sigma + lo * phi0.max(phi1), sigma + hi * phi0.max(phi1));
        for v in [v_lo, v_hi] {
            prop_assert!((0.0..=1.0).contains(&p_fa(v, &p)));
            prop_assert!((0.0..=1.0).contains(&p_md(v, &p)));
        }
        prop_assert!(p_fa(v_hi, &p) <= p_fa(v_lo, &p));
        prop_assert!(p_md(v_hi, &p) >= p_md(v_lo, &p) - 1e-15);
    }

    #[test]
    fn optimal_threshold_is_a_local_minimum(phi0 in scale(), phi1 in scale()) {
        let p = DetectionParams::new(phi0, phi1, 0.1).unwrap();
        let v = optimal_threshold(&p).unwrap();
        let at = detection_error_sum(v, &p, None).unwrap();
        let step = 1e-3 * optimal_excess(&p).unwrap();
        for w in [v - step, v + step] {
            prop_assert!(detection_error_sum(w, &p, None).unwrap() >= at - 1e-12);
        }
    }

    #[test]
    fn min_error_depends_only_on_ratio(phi0 in scale(), phi1 in scale(), c in scale()) {
        let e = min_detection_error(&DetectionParams::new(phi0, phi1, 1.0).unwrap()).unwrap();
        let scaled = DetectionParams::new(c * phi0, c * phi1, 0.01).unwrap();
        prop_assert!((min_detection_error(&scaled).unwrap() - e).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&e));
    }

    #[test]
    fn min_error_decreases_with_signal_ratio(r1 in scale(), r2 in scale()) {
        let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        let e = |r: f64| min_detection_error(&DetectionParams::new(1.0, r, 1.0).unwrap()).unwrap();
        prop_assert!(e(hi) <= e(lo) + 1e-12);
    }
}
