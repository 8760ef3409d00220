#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nested_qcf::cli::analytic_value;
use nested_qcf::elements::{ElementProfile, NoiseSetting};
use nested_qcf::engine::{estimate, FrameworkSpec, Scenario};

/// Frameworks with N ∈ [1, 6], p, q ∈ [0.5, 0.95], p* ∈ {0, 0.5},
/// P_e ∈ [0, 0.5].
pub fn random_specs(count: usize, seed: u64) -> Vec<FrameworkSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let depth = rng.random_range(1..=6);
            let elements = (0..depth)
                .map(|_| {
                    let p = rng.random_range(0.5..=0.95);
                    let q = rng.random_range(0.5..=0.95);
                    let p_star = if rng.random_bool(0.5) { 0.0 } else { 0.5 };
                    ElementProfile::new("rand", p, q, p_star).unwrap()
                })
                .collect();
            let noise = NoiseSetting::new(rng.random_range(0.0..=0.5)).unwrap();
            FrameworkSpec::new(elements, noise).unwrap()
        })
        .collect()
}

/// Whether a Monte Carlo estimate lies within `sigmas` standard errors of
/// the closed form. The standard error is the binomial one at the closed-form
/// probability, so rare events with zero observed hits are judged fairly.
pub fn agrees(spec: &FrameworkSpec, scenario: Scenario, trials: u64, seed: u64, sigmas: f64) -> bool {
    deviation(spec, scenario, trials, seed).0 <= sigmas
}

/// `(|estimate − analytic| / σ_analytic, |estimate − analytic| / std_error)`;
/// the second ratio is infinite when the plug-in error is zero and the two differ.
pub fn deviation(spec: &FrameworkSpec, scenario: Scenario, trials: u64, seed: u64) -> (f64, f64) {
    let stats = estimate(spec, scenario, trials, seed).unwrap();
    let analytic = analytic_value(spec, scenario);
    let gap = (stats.estimate - analytic).abs();
    let sigma = (analytic * (1.0 - analytic) / trials as f64).sqrt();
    let ratio = |s: f64| if gap == 0.0 { 0.0 } else { gap / s };
    (ratio(sigma), ratio(stats.std_error))
}
