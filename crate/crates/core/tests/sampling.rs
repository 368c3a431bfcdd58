use std::collections::HashMap;

use num_traits::ToPrimitive;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use bestchoice::count::{catalan, win_probability_321};
use bestchoice::oracle::enumerate_avoiders;
use bestchoice::perm::{Pattern, Permutation};
use bestchoice::sampler::{
    estimate_win_rate, estimate_win_rate_parallel, sample_dyck_uniform, AvoiderSampler, RngStream, SplitMode,
};

const SIGNIFICANCE: f64 = 1e-3;
const SAMPLES: u64 = 1_000_000;

fn chi_square_passes(n: usize, q: Pattern, mode: SplitMode, samples: u64, seed: u64) -> (f64, f64) {
    let support: Vec<Permutation> = enumerate_avoiders(n, q).unwrap().collect();
    let mut counts: HashMap<Permutation, u64> = support.iter().map(|p| (p.clone(), 0)).collect();
    let sampler = AvoiderSampler::with_mode(n, q, mode).unwrap();
    let mut rng = RngStream::new(seed);
    for _ in 0..samples {
        let p = sampler.sample(&mut rng);
        *counts.get_mut(&p).unwrap_or_else(|| panic!("{p} is not an avoider of {q}")) += 1;
    }
    let expected = samples as f64 / support.len() as f64;
    let stat: f64 = counts
        .values()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let df = (support.len() - 1) as f64;
    let critical = ChiSquared::new(df).unwrap().inverse_cdf(1.0 - SIGNIFICANCE);
    (stat, critical)
}

#[test]
fn uniform_over_avoiders_up_to_six() {
    for q in [Pattern::P321, Pattern::P231] {
        for n in 2..=6 {
            let (stat, critical) = chi_square_passes(n, q, SplitMode::Float, SAMPLES, 1000 + n as u64);
            assert!(stat < critical, "{q} N={n}: chi2 {stat:.2} >= {critical:.2}");
        }
    }
}

#[test]
fn exact_split_mode_is_uniform() {
    for n in [4, 6] {
        let (stat, critical) = chi_square_passes(n, Pattern::P231, SplitMode::Exact, 200_000, 7);
        assert!(stat < critical, "N={n}: chi2 {stat:.2} >= {critical:.2}");
    }
}

#[test]
fn dyck_sampler_size_three() {
    let mut freq: HashMap<String, u64> = HashMap::new();
    let mut rng = RngStream::new(3);
    let draws = 100_000;
    for _ in 0..draws {
        *freq.entry(sample_dyck_uniform(3, &mut rng).unwrap().to_string()).or_default() += 1;
    }
    assert_eq!(freq.len(), 5);
    let sigma = (draws as f64 * 0.2 * 0.8).sqrt();
    for (path, c) in freq {
        assert!((c as f64 - 0.2 * draws as f64).abs() < 4.0 * sigma, "{path}: {c}");
    }
}

#[test]
fn sampling_is_reproducible() {
    let draw = |seed| {
        let mut rng = RngStream::new(seed);
        sample_dyck_uniform(8, &mut rng).unwrap()
    };
    assert_eq!(draw(42), draw(42));
    let a = estimate_win_rate_parallel(10, 7, Pattern::P321, 20_000, 9, 4).unwrap();
    let b = estimate_win_rate_parallel(10, 7, Pattern::P321, 20_000, 9, 4).unwrap();
    assert_eq!(a, b);
}

#[test]
fn large_sizes_sample_quickly() {
    let mut rng = RngStream::new(5);
    let p = AvoiderSampler::new(100_000, Pattern::P231).unwrap().sample(&mut rng);
    assert_eq!(p.len(), 100_000);
    let d = sample_dyck_uniform(1_000_000, &mut rng).unwrap();
    assert_eq!(d.size(), 1_000_000);
}

#[test]
fn estimates_are_consistent_over_seeds() {
    // |p_hat - exact| <= 4 stderr in at least 99 of 100 seeded runs
    let (n, k) = (10, 7);
    let exact = win_probability_321(k, n).unwrap().to_f64();
    let hits = (0..100u64)
        .filter(|&seed| {
            let e = estimate_win_rate(n, k, Pattern::P321, 10_000, &mut RngStream::new(seed)).unwrap();
            e.z_score(exact) <= 4.0
        })
        .count();
    assert!(hits >= 99, "{hits}/100 seeds within 4 stderr");
}

#[test]
fn model_231_estimate() {
    let e = estimate_win_rate(5, 2, Pattern::P231, 100_000, &mut RngStream::new(11)).unwrap();
    let exact = catalan(4).to_f64().unwrap() / catalan(5).to_f64().unwrap();
    assert!(e.z_score(exact) < 3.0, "{e:?}");
}

#[test]
fn size_two_wins_only_on_identity() {
    let e = estimate_win_rate(2, 1, Pattern::P321, 10_000, &mut RngStream::new(2)).unwrap();
    // 12 and 21 are the only candidates; k = 1 wins exactly on 12
    assert!(e.wins > 4_000 && e.wins < 6_000);
    assert_eq!(e.p_hat, e.wins as f64 / e.trials as f64);
}
