use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use covert_core::channel::{draw_fading, eve_effective_gain, random_selection, select_antennas};

fn channel_vec(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), len).prop_map(|v| {
        v.into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect()
    })
}

#[test]
fn eve_gain_is_unit_exponential() {
    // MRT weights are independent of h_ae, so |w^H h_ae|^2 ~ Exp(1)
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 100_000;
    let mut samples: Vec<f64> = (0..n)
        .map(|_| {
            let f = draw_fading(&mut rng, 10).unwrap();
            let sel = select_antennas(&f.h_ab, 6).unwrap();
            eve_effective_gain(&sel.gather(&f.h_ab), &sel.gather(&f.h_ae)).unwrap()
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    let d = samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = 1.0 - (-x).exp();
            (cdf - i as f64 / n as f64).max((i + 1) as f64 / n as f64 - cdf)
        })
        .fold(0.0, f64::max);
    // Kolmogorov critical value at the 1% level
    assert!(d < 1.628 / (n as f64).sqrt(), "KS statistic {d}");
}

#[test]
fn best_gain_mean_matches_order_statistics() {
    // E of the sum of the top k of M unit exponentials: k (1 + H_M - H_k)
    let harmonic = |m: usize| (1..=m).map(|i| 1.0 / i as f64).sum::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let n = 50_000;
    for k in [1, 4, 10] {
        let mean = (0..n)
            .map(|_| {
                let f = draw_fading(&mut rng, 10).unwrap();
                select_antennas(&f.h_ab, k).unwrap().g_ab
            })
            .sum::<f64>()
            / n as f64;
        let expected = k as f64 * (1.0 + harmonic(10) - harmonic(k));
        assert!(
            (mean - expected).abs() < 0.02 * expected,
            "k={k}: {mean} vs {expected}"
        );
    }
}

proptest! {
    #[test]
    fn best_gain_grows_with_selection_size(h in channel_vec(1..=12)) {
        let mut prev = 0.0;
        for n_d in 1..=h.len() {
            let g = select_antennas(&h, n_d).unwrap().g_ab;
            prop_assert!(g >= prev);
            prev = g;
        }
    }

    #[test]
    fn best_selection_dominates_random(h in channel_vec(1..=12), seed in any::<u64>(), frac in 0.0f64..1.0) {
        let n_d = 1 + ((h.len() - 1) as f64 * frac) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random = random_selection(&mut rng, &h, n_d).unwrap();
        let best = select_antennas(&h, n_d).unwrap();
        prop_assert!(best.g_ab >= random.g_ab);
        prop_assert_eq!(random.indices.len(), n_d);
    }

    #[test]
    fn eve_gain_ignores_beamformer_scale(
        pair in (1usize..=8).prop_flat_map(|n| (channel_vec(n..=n), channel_vec(n..=n))),
        c in 1e-3f64..1e3,
    ) {
        let (a, e) = pair;
        prop_assume!(a.iter().any(|z| z.norm_sqr() > 1e-6));
        let scaled: Vec<Complex64> = a.iter().map(|z| z * c).collect();
        let g = eve_effective_gain(&a, &e).unwrap();
        let gs = eve_effective_gain(&scaled, &e).unwrap();
        prop_assert!((g - gs).abs() <= 1e-10 * (1.0 + g));
        let bound: f64 = e.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!(g <= bound * (1.0 + 1e-12));
    }
}
