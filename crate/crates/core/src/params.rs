//! Dimensionless model configuration.
//!
//! Every frequency is measured in units of the central-spin frequency
//! `omega0`, which is fixed to 1; times are in units of `1/omega0`. The bath
//! temperature only ever enters through the product `beta * omega1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant in J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Central/bath coupling type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Interaction {
    /// Flip-flop exchange, excitation conserving.
    #[default]
    XY,
    /// Flip-flop plus counter-rotating terms (lab frame).
    XX,
    /// Flip-flop plus a longitudinal `J_z sigma_z` coupling of equal strength.
    XYZ,
}

impl fmt::Display for Interaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Interaction::XY => "XY",
            Interaction::XX => "XX",
            Interaction::XYZ => "XYZ",
        };
        f.write_str(s)
    }
}

impl FromStr for Interaction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "XY" => Ok(Interaction::XY),
            "XX" => Ok(Interaction::XX),
            "XYZ" => Ok(Interaction::XYZ),
            other => Err(Error::Config(format!("unknown interaction '{other}'"))),
        }
    }
}

/// Physical configuration of the spin star.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Number of bath spins `M`.
    pub bath_size: usize,
    /// Detuning `omega0 - omega1`.
    pub detuning: f64,
    /// Homogeneous coupling `g`.
    pub coupling: f64,
    /// Thermal parameter `beta * omega1`.
    pub beta_omega1: f64,
    pub interaction: Interaction,
}

impl ModelParams {
    pub fn new(bath_size: usize, detuning: f64, coupling: f64, beta_omega1: f64) -> Result<Self> {
        let params = ModelParams {
            bath_size,
            detuning,
            coupling,
            beta_omega1,
            interaction: Interaction::XY,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_interaction(mut self, interaction: Interaction) -> Self {
        self.interaction = interaction;
        self
    }

    pub fn with_beta_omega1(mut self, beta_omega1: f64) -> Self {
        self.beta_omega1 = beta_omega1;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.bath_size == 0 {
            return Err(Error::InvalidParams("bath size must be at least 1".into()));
        }
        if !(self.coupling > 0.0) || !self.coupling.is_finite() {
            return Err(Error::InvalidParams(format!(
                "coupling must be positive and finite, got {}",
                self.coupling
            )));
        }
        if !self.detuning.is_finite() {
            return Err(Error::InvalidParams("detuning must be finite".into()));
        }
        if !(self.beta_omega1 >= 0.0) || self.beta_omega1.is_nan() {
            return Err(Error::InvalidParams(format!(
                "beta*omega1 must be nonnegative, got {}",
                self.beta_omega1
            )));
        }
        Ok(())
    }

    /// Bath spin frequency `omega1 = 1 - detuning`.
    pub fn bath_frequency(&self) -> f64 {
        1.0 - self.detuning
    }

    /// Number of collective levels, `M + 1`.
    pub fn levels(&self) -> usize {
        self.bath_size + 1
    }
}

/// How a quoted frequency should be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrequencyConvention {
    /// The number already is an angular frequency (rad/s).
    Angular,
    /// The number is an ordinary frequency (Hz); it is multiplied by 2 pi.
    Ordinary,
}

/// `beta * omega1 = hbar * omega1 / (k_B T)` for a bath frequency given in MHz.
///
/// With [`FrequencyConvention::Ordinary`] the value is converted to an
/// angular frequency before use.
pub fn thermal_parameter(
    bath_frequency_mhz: f64,
    convention: FrequencyConvention,
    temperature_kelvin: f64,
) -> Result<f64> {
    if !(temperature_kelvin > 0.0) {
        return Err(Error::Domain(format!(
            "temperature must be positive, got {temperature_kelvin}"
        )));
    }
    if !(bath_frequency_mhz >= 0.0) {
        return Err(Error::Domain(format!(
            "bath frequency must be nonnegative, got {bath_frequency_mhz}"
        )));
    }
    let omega = match convention {
        FrequencyConvention::Angular => bath_frequency_mhz * 1e6,
        FrequencyConvention::Ordinary => 2.0 * std::f64::consts::PI * bath_frequency_mhz * 1e6,
    };
    Ok(HBAR * omega / (BOLTZMANN * temperature_kelvin))
}
