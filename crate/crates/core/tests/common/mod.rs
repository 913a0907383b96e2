//! Reference formulas written out directly, independent of the library's
//! own implementation.

#![allow(dead_code)]

/// `|<g,m|U|g,m>|^2` from the two-level Rabi solution.
pub fn alpha_sq(m: usize, bath_size: usize, delta: f64, g: f64, tau: f64) -> f64 {
    let coupled = 2.0 * g * ((m * (bath_size + 1 - m)) as f64).sqrt();
    let omega = (delta * delta / 4.0 + coupled * coupled).sqrt();
    if omega == 0.0 {
        return 1.0;
    }
    let c = (omega * tau).cos();
    let s = (omega * tau).sin();
    c * c + (delta / 2.0 * s / omega).powi(2)
}

/// Unnormalized thermal weights `x^m`.
pub fn thermal_weights(bath_size: usize, beta_omega1: f64) -> Vec<f64> {
    (0..=bath_size).map(|m| (-beta_omega1 * m as f64).exp()).collect()
}

/// Populations after `rounds` equally spaced rounds and their success
/// probability, from `p_m |alpha_m|^(2N)`.
pub fn equal_spacing_direct(
    bath_size: usize,
    delta: f64,
    g: f64,
    beta_omega1: f64,
    tau: f64,
    rounds: u32,
) -> (Vec<f64>, f64) {
    let w = thermal_weights(bath_size, beta_omega1);
    let z: f64 = w.iter().sum();
    let survived: Vec<f64> = w
        .iter()
        .enumerate()
        .map(|(m, wm)| wm / z * alpha_sq(m, bath_size, delta, g, tau).powi(rounds as i32))
        .collect();
    let prob: f64 = survived.iter().sum();
    (survived.iter().map(|v| v / prob).collect(), prob)
}

pub fn polarization(populations: &[f64]) -> f64 {
    let half = (populations.len() - 1) as f64 / 2.0;
    populations.iter().enumerate().map(|(m, p)| p * (half - m as f64)).sum::<f64>().abs() / half
}

pub fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Polarization the conditioned protocol approaches in the full product
/// space: every total-spin multiplet `J` collapses onto its lowest state,
/// keeping only the weight that state had initially.
pub fn dark_state_ceiling(spins: usize, beta_omega1: f64) -> f64 {
    let x = (-beta_omega1).exp();
    let (mut weight, mut moment) = (0.0, 0.0);
    for excitations in 0..=spins / 2 {
        // multiplet J = spins/2 - excitations; its lowest state has `excitations` up-spins
        let copies = binomial(spins, excitations) - if excitations > 0 { binomial(spins, excitations - 1) } else { 0.0 };
        let w = copies * x.powi(excitations as i32);
        weight += w;
        moment += w * (spins as f64 / 2.0 - excitations as f64);
    }
    moment / weight / (spins as f64 / 2.0)
}

/// `(sum x^m, sum m x^m)` for `m = 0..=n` by explicit summation.
pub fn partial_sums(x: f64, n: usize) -> (f64, f64) {
    (0..=n).fold((0.0, 0.0), |(a, b), m| (a + x.powi(m as i32), b + m as f64 * x.powi(m as i32)))
}

/// The same sums from their closed forms.
pub fn geometric_closed_forms(x: f64, n: usize) -> (f64, f64) {
    let n_f = n as f64;
    let s0 = (1.0 - x.powi(n as i32 + 1)) / (1.0 - x);
    let s1 = x * (1.0 - (n_f + 1.0) * x.powi(n as i32) + n_f * x.powi(n as i32 + 1)) / (1.0 - x).powi(2);
    (s0, s1)
}

/// Deterministic random intervals in `[lo, hi)`.
pub fn random_taus(seed: u64, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(lo..hi)).collect()
}
