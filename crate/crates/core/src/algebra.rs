//! Closed-form dynamics inside the symmetric (Dicke) sector of the bath.
//!
//! The bath density matrix stays diagonal in the collective basis `|m>`
//! (`m` = number of excited bath spins), so a state is just a population
//! vector. One round of free evolution followed by a successful ground-state
//! measurement of the central spin multiplies each population by the
//! reduction factor `|alpha_m(tau)|^2` and renormalizes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Success probabilities below this are treated as a wiped-out state.
pub const ANNIHILATION_THRESHOLD: f64 = 1e-300;

/// Relative drift of the population sum that triggers a second renormalization.
const NORMALIZATION_DRIFT: f64 = 1e-12;

/// Diagonal bath state over the collective levels `m = 0..=M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BathState {
    populations: Vec<f64>,
}

impl BathState {
    /// Wraps an already normalized population vector.
    pub fn new(populations: Vec<f64>) -> Result<Self> {
        if populations.len() < 2 {
            return Err(Error::InvalidParams(
                "a bath state needs at least two levels".into(),
            ));
        }
        if populations.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidParams(
                "populations must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = populations.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_DRIFT {
            return Err(Error::InvalidParams(format!(
                "populations sum to {total}, expected 1"
            )));
        }
        Ok(BathState { populations })
    }

    /// Normalizes arbitrary nonnegative weights into a state.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidParams(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParams("weights sum to zero".into()));
        }
        BathState::new(normalized(weights, total))
    }

    /// The fully polarized state `|m = 0>`.
    pub fn ground(bath_size: usize) -> Self {
        let mut populations = vec![0.0; bath_size + 1];
        populations[0] = 1.0;
        BathState { populations }
    }

    pub fn thermal(params: &ModelParams) -> Self {
        thermal_populations(params)
    }

    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    pub fn into_populations(self) -> Vec<f64> {
        self.populations
    }

    pub fn bath_size(&self) -> usize {
        self.populations.len() - 1
    }

    pub fn polarization(&self) -> f64 {
        polarization_degree(self)
    }

    pub fn entropy(&self) -> f64 {
        entropy(self)
    }

    /// Scales every population by `factors[m]` and renormalizes, returning the
    /// new state and the total retained weight.
    pub fn condition(&self, factors: &[f64]) -> Result<(BathState, f64)> {
        assert_eq!(factors.len(), self.populations.len());
        let weights: Vec<f64> = self
            .populations
            .iter()
            .zip(factors)
            .map(|(p, f)| p * f)
            .collect();
        let probability: f64 = weights.iter().sum();
        if !(probability >= ANNIHILATION_THRESHOLD) {
            return Err(Error::Annihilated { probability });
        }
        Ok((BathState { populations: normalized(weights, probability) }, probability))
    }
}

fn normalized(mut weights: Vec<f64>, total: f64) -> Vec<f64> {
    for w in weights.iter_mut() {
        *w = (*w / total).max(0.0);
    }
    let drift: f64 = weights.iter().sum::<f64>() - 1.0;
    if drift.abs() > NORMALIZATION_DRIFT {
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
    }
    weights
}

/// Thermal populations `p_m ~ exp(-beta omega1 m)`.
///
/// The `m`-independent factor `exp(beta omega1 M / 2)` cancels on
/// normalization and is never formed.
pub fn thermal_populations(params: &ModelParams) -> BathState {
    let b = params.beta_omega1;
    let weights: Vec<f64> = (0..=params.bath_size).map(|m| (-b * m as f64).exp()).collect();
    let total: f64 = weights.iter().sum();
    BathState { populations: normalized(weights, total) }
}

fn check_level(m: usize, params: &ModelParams) -> Result<()> {
    if m > params.bath_size {
        return Err(Error::LevelOutOfRange { level: m, bath_size: params.bath_size });
    }
    Ok(())
}

/// Collective coupling frequency `Omega'_m = 2 g sqrt(m (M - m + 1))`.
pub fn coupling_frequency(m: usize, params: &ModelParams) -> Result<f64> {
    check_level(m, params)?;
    Ok(coupling_frequency_unchecked(m, params.bath_size, params.coupling))
}

#[inline]
fn coupling_frequency_unchecked(m: usize, bath_size: usize, coupling: f64) -> f64 {
    let m = m as f64;
    2.0 * coupling * (m * (bath_size as f64 - m + 1.0)).sqrt()
}

/// Generalized Rabi frequency `Omega_m = sqrt(Delta^2 / 4 + Omega'_m^2)`.
pub fn rabi_frequency(m: usize, params: &ModelParams) -> Result<f64> {
    let coupled = coupling_frequency(m, params)?;
    Ok((0.25 * params.detuning * params.detuning + coupled * coupled).sqrt())
}

/// `alpha_m(tau) = <g, m| U(tau) |g, m>`.
pub fn polarization_coefficient(m: usize, tau: f64, params: &ModelParams) -> Result<Complex64> {
    let omega = rabi_frequency(m, params)?;
    if omega == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let (s, c) = (omega * tau).sin_cos();
    Ok(Complex64::new(c, 0.5 * params.detuning * s / omega))
}

/// Precomputed `(Omega_m, (Omega'_m / Omega_m)^2)` for every level, so that
/// `|alpha_m(tau)|^2 = 1 - ratio_m sin^2(Omega_m tau)`.
///
/// That form is exact at `m = 0` (ratio 0) and never exceeds one.
#[derive(Debug, Clone)]
pub struct ReductionTable {
    rabi: Vec<f64>,
    ratio: Vec<f64>,
}

impl ReductionTable {
    pub fn new(params: &ModelParams) -> Self {
        let quarter_detuning_sq = 0.25 * params.detuning * params.detuning;
        let (rabi, ratio) = (0..=params.bath_size)
            .map(|m| {
                let coupled = coupling_frequency_unchecked(m, params.bath_size, params.coupling);
                let coupled_sq = coupled * coupled;
                let omega_sq = quarter_detuning_sq + coupled_sq;
                let ratio = if omega_sq > 0.0 { coupled_sq / omega_sq } else { 0.0 };
                (omega_sq.sqrt(), ratio)
            })
            .unzip();
        ReductionTable { rabi, ratio }
    }

    pub fn levels(&self) -> usize {
        self.rabi.len()
    }

    #[inline]
    pub fn factor(&self, m: usize, tau: f64) -> f64 {
        let s = (self.rabi[m] * tau).sin();
        1.0 - self.ratio[m] * s * s
    }

    pub fn factors(&self, tau: f64) -> Vec<f64> {
        (0..self.levels()).map(|m| self.factor(m, tau)).collect()
    }

    /// Polarization degree after one conditioned round, without building
    /// the new state.
    pub fn polarization_after(&self, state: &BathState, tau: f64) -> f64 {
        let half = 0.5 * (self.levels() - 1) as f64;
        let (mut weight, mut moment) = (0.0, 0.0);
        for (m, p) in state.populations().iter().enumerate() {
            let w = p * self.factor(m, tau);
            weight += w;
            moment += w * (half - m as f64);
        }
        if weight > 0.0 {
            (moment / weight).abs() / half
        } else {
            0.0
        }
    }
}

/// `|alpha_m(tau)|^{2N}` over all levels after `N` equally spaced rounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarizationProfile {
    pub values: Vec<f64>,
    pub tau: f64,
    pub rounds: u32,
}

pub fn coefficient_profile(params: &ModelParams, tau: f64, rounds: u32) -> Result<PolarizationProfile> {
    if rounds == 0 {
        return Err(Error::Domain("profile needs at least one round".into()));
    }
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("interval must be nonnegative, got {tau}")));
    }
    let table = ReductionTable::new(params);
    let values = (0..table.levels())
        .map(|m| table.factor(m, tau).clamp(0.0, 1.0).powi(rounds as i32))
        .collect();
    Ok(PolarizationProfile { values, tau, rounds })
}

/// One round of evolution for `tau` followed by a successful ground-state
/// measurement. Returns the conditioned state and the round's success
/// probability.
pub fn apply_round(state: &BathState, tau: f64, params: &ModelParams) -> Result<(BathState, f64)> {
    if state.bath_size() != params.bath_size {
        return Err(Error::InvalidParams(format!(
            "state has {} levels but the model has {}",
            state.populations.len(),
            params.levels()
        )));
    }
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("interval must be nonnegative, got {tau}")));
    }
    let table = ReductionTable::new(params);
    state.condition(&table.factors(tau))
}

/// `|sum_m p_m (M/2 - m)| / (M/2)`.
pub fn polarization_degree(state: &BathState) -> f64 {
    let half = 0.5 * state.bath_size() as f64;
    let moment: f64 = state
        .populations
        .iter()
        .enumerate()
        .map(|(m, p)| p * (half - m as f64))
        .sum();
    (moment.abs() / half).min(1.0)
}

/// Von Neumann entropy of the diagonal state, with `0 ln 0 = 0`.
pub fn entropy(state: &BathState) -> f64 {
    shannon_entropy(&state.populations)
}

pub(crate) fn shannon_entropy(weights: &[f64]) -> f64 {
    let s: f64 = weights
        .iter()
        .filter(|p| **p > 0.0)
        .map(|p| -p * p.ln())
        .sum();
    s.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(m: usize, delta: f64, g: f64, b: f64) -> ModelParams {
        ModelParams::new(m, delta, g, b).unwrap()
    }

    /// Direct evaluation of `cos + i Delta sin / (2 Omega)`, kept apart from
    /// the reduction-table path.
    fn alpha_sq_direct(m: usize, tau: f64, p: &ModelParams) -> f64 {
        let mm = m as f64;
        let omega = (p.detuning * p.detuning / 4.0
            + 4.0 * p.coupling * p.coupling * mm * (p.bath_size as f64 - mm + 1.0))
            .sqrt();
        if omega == 0.0 {
            return 1.0;
        }
        let a = Complex64::new((omega * tau).cos(), p.detuning * (omega * tau).sin() / (2.0 * omega));
        a.norm_sqr()
    }

    #[test]
    fn thermal_limits() {
        let flat = thermal_populations(&params(3, 0.1, 0.1, 0.0));
        for p in flat.populations() {
            assert_abs_diff_eq!(*p, 0.25, epsilon = 1e-15);
        }
        let cold = thermal_populations(&params(5, 0.1, 0.1, 100.0));
        assert_abs_diff_eq!(cold.populations()[0], 1.0, epsilon = 1e-15);
        assert!(cold.populations()[1] < 1e-40);
    }

    #[test]
    fn thermal_geometric_sum() {
        let s = thermal_populations(&params(2, 0.0, 0.1, std::f64::consts::LN_2));
        let expected = [4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0];
        for (p, e) in s.populations().iter().zip(expected) {
            assert_abs_diff_eq!(*p, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn thermal_large_bath_no_overflow() {
        let s = thermal_populations(&params(5000, 0.1, 0.1, 2.0));
        let total: f64 = s.populations().iter().sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        assert!(s.populations().iter().all(|p| p.is_finite()));
    }

    #[test]
    fn rabi_frequency_values() {
        let p = params(4, 0.2, 0.1, 1.0);
        assert_abs_diff_eq!(rabi_frequency(0, &p).unwrap(), 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(rabi_frequency(2, &p).unwrap(), 0.5, epsilon = 1e-15);
        let resonant = params(1, 0.0, 0.5, 1.0);
        assert_abs_diff_eq!(rabi_frequency(1, &resonant).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(
            rabi_frequency(5, &params(4, 0.2, 0.1, 1.0)).unwrap_err(),
            Error::LevelOutOfRange { level: 5, bath_size: 4 }
        );
        assert!(matches!(coupling_frequency(9, &p), Err(Error::LevelOutOfRange { .. })));
    }

    #[test]
    fn coefficient_identities() {
        let p = params(6, 0.3, 0.2, 1.0);
        for m in 0..=6 {
            let a = polarization_coefficient(m, 0.0, &p).unwrap();
            assert_eq!(a, Complex64::new(1.0, 0.0));
        }
        for tau in [0.1, 1.0, 7.3] {
            assert_abs_diff_eq!(polarization_coefficient(0, tau, &p).unwrap().norm(), 1.0, epsilon = 1e-15);
        }
        let resonant = params(6, 0.0, 0.2, 1.0);
        for m in 1..=6 {
            let a = polarization_coefficient(m, 0.7, &resonant).unwrap();
            let w = coupling_frequency(m, &resonant).unwrap();
            assert_eq!(a.im, 0.0);
            assert_abs_diff_eq!(a.re, (w * 0.7).cos(), epsilon = 1e-15);
        }
        // degenerate Omega = 0
        let a = polarization_coefficient(0, 3.0, &resonant).unwrap();
        assert_eq!(a, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn reduction_table_matches_complex_form() {
        let p = params(40, 0.37, 0.05, 0.2);
        let table = ReductionTable::new(&p);
        for m in 0..=40 {
            for tau in [0.0, 0.013, 0.5, 2.0, 31.0] {
                let via_alpha = polarization_coefficient(m, tau, &p).unwrap().norm_sqr();
                assert_abs_diff_eq!(table.factor(m, tau), via_alpha, epsilon = 1e-13);
                assert!(table.factor(m, tau) <= 1.0);
            }
        }
        assert_eq!(table.factor(0, 1.234), 1.0);
    }

    #[test]
    fn profile_small_bath_direct_evaluation() {
        let tau = 2.0 * std::f64::consts::PI;
        let p = params(2, 0.0, 0.25, 1.0);
        let profile = coefficient_profile(&p, tau, 1).unwrap();
        assert_eq!(profile.values[0], 1.0);
        for m in 0..=2 {
            assert_abs_diff_eq!(profile.values[m], alpha_sq_direct(m, tau, &p), epsilon = 1e-14);
        }
        let ones = coefficient_profile(&p, 0.0, 1).unwrap();
        assert!(ones.values.iter().all(|v| *v == 1.0));
        assert!(coefficient_profile(&p, 0.1, 0).is_err());
    }

    #[test]
    fn profile_large_bath_has_protected_levels() {
        let p = params(700, 0.1, 0.1, 1e-3);
        let profile = coefficient_profile(&p, 0.1, 10).unwrap();
        assert_eq!(profile.values[0], 1.0);
        let interior = &profile.values[1..700];
        let max = interior.iter().cloned().fold(0.0, f64::max);
        let min = interior.iter().cloned().fold(1.0, f64::min);
        assert!(max > 0.9, "interior peak {max}");
        assert!(min < 1e-3, "deep minimum {min}");
        assert!(profile.values.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn round_on_ground_state_is_trivial() {
        let p = params(5, 0.2, 0.1, 1.0);
        let (s, prob) = apply_round(&BathState::ground(5), 0.7, &p).unwrap();
        assert_eq!(s, BathState::ground(5));
        assert_eq!(prob, 1.0);
    }

    #[test]
    fn two_level_round() {
        let g = 0.3;
        let p = params(1, 0.0, g, 1.0);
        // cos^2(2 g tau) = 1/2
        let tau = std::f64::consts::FRAC_PI_4 / (2.0 * g);
        let start = BathState::new(vec![0.5, 0.5]).unwrap();
        let (s, prob) = apply_round(&start, tau, &p).unwrap();
        assert_abs_diff_eq!(prob, 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(s.populations()[0], 2.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.populations()[1], 1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn protected_interval_leaves_state_alone() {
        let g = 0.25;
        let p = params(1, 0.0, g, 1.0);
        let tau = std::f64::consts::PI / (2.0 * g);
        let start = BathState::new(vec![0.6, 0.4]).unwrap();
        let (s, prob) = apply_round(&start, tau, &p).unwrap();
        assert_abs_diff_eq!(prob, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.populations()[1], 0.4, epsilon = 1e-14);
    }

    #[test]
    fn annihilation_is_signalled() {
        let g = 0.25;
        let p = params(1, 0.0, g, 1.0);
        let tau = std::f64::consts::FRAC_PI_2 / (2.0 * g);
        let excited = BathState::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(apply_round(&excited, tau, &p), Err(Error::Annihilated { .. })));
    }

    #[test]
    fn round_rejects_mismatched_state() {
        let p = params(3, 0.0, 0.1, 1.0);
        assert!(apply_round(&BathState::ground(4), 0.1, &p).is_err());
        assert!(apply_round(&BathState::ground(3), -0.1, &p).is_err());
    }

    #[test]
    fn polarization_values() {
        assert_eq!(polarization_degree(&BathState::ground(7)), 1.0);
        for m in [1usize, 2, 5, 10] {
            let uniform = BathState::from_weights(vec![1.0; m + 1]).unwrap();
            assert_abs_diff_eq!(polarization_degree(&uniform), 0.0, epsilon = 1e-14);
        }
        let s = BathState::new(vec![0.5, 0.25, 0.25]).unwrap();
        assert_abs_diff_eq!(polarization_degree(&s), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&BathState::ground(3)), 0.0);
        let uniform = BathState::from_weights(vec![1.0; 4]).unwrap();
        assert_abs_diff_eq!(entropy(&uniform), 4f64.ln(), epsilon = 1e-14);
        let half = BathState::new(vec![0.5, 0.5, 0.0]).unwrap();
        assert_abs_diff_eq!(entropy(&half), std::f64::consts::LN_2, epsilon = 1e-15);
    }

    #[test]
    fn state_validation() {
        assert!(BathState::new(vec![1.0]).is_err());
        assert!(BathState::new(vec![0.5, 0.6]).is_err());
        assert!(BathState::new(vec![1.5, -0.5]).is_err());
        assert!(BathState::from_weights(vec![0.0, 0.0]).is_err());
        let s = BathState::from_weights(vec![2.0, 1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(s.populations()[0], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn polarization_after_matches_full_round() {
        let p = params(30, 0.1, 0.05, 0.05);
        let table = ReductionTable::new(&p);
        let s = thermal_populations(&p);
        for tau in [0.01, 0.1, 0.77] {
            let (next, _) = apply_round(&s, tau, &p).unwrap();
            assert_abs_diff_eq!(table.polarization_after(&s, tau), next.polarization(), epsilon = 1e-13);
        }
    }
}
