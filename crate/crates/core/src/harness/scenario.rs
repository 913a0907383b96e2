//! Named experimental presets and temperature calibration.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{FrequencyConvention, ModelParams};
use crate::schedule::thermal_polarization_exact;

/// Thermal polarization the shared calibration reproduces ...
pub const REFERENCE_POLARIZATION: f64 = 0.257;
/// ... for a bath of this size ...
pub const REFERENCE_BATH_SIZE: usize = 700;
/// ... whose spins precess at this frequency (`120 MHz * (1 - 0.1)`).
pub const REFERENCE_BATH_FREQUENCY_MHZ: f64 = 108.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioName {
    NV1,
    NV2,
    QD1,
    QD2,
    Custom,
}

impl ScenarioName {
    pub const PRESETS: [ScenarioName; 4] = [ScenarioName::NV1, ScenarioName::NV2, ScenarioName::QD1, ScenarioName::QD2];
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioName::NV1 => "NV1",
            ScenarioName::NV2 => "NV2",
            ScenarioName::QD1 => "QD1",
            ScenarioName::QD2 => "QD2",
            ScenarioName::Custom => "custom",
        })
    }
}

impl FromStr for ScenarioName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "NV1" => Ok(ScenarioName::NV1),
            "NV2" => Ok(ScenarioName::NV2),
            "QD1" => Ok(ScenarioName::QD1),
            "QD2" => Ok(ScenarioName::QD2),
            "CUSTOM" => Ok(ScenarioName::Custom),
            other => Err(Error::Config(format!("unknown scenario '{other}'"))),
        }
    }
}

/// Hardware parameters of a preset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub bath_size: usize,
    /// Central-spin frequency in MHz.
    pub omega0_mhz: f64,
    /// `Delta / omega0`
    pub delta_ratio: f64,
    /// `g / omega0`
    pub g_ratio: f64,
}

impl Preset {
    /// Bath-spin frequency `omega0 (1 - Delta/omega0)` in MHz.
    pub fn bath_frequency_mhz(&self) -> f64 {
        self.omega0_mhz * (1.0 - self.delta_ratio)
    }
}

pub fn preset(name: ScenarioName) -> Option<Preset> {
    let (bath_size, omega0_mhz, delta_ratio, g_ratio) = match name {
        ScenarioName::NV1 => (500, 120.0, 0.1, 0.03),
        ScenarioName::NV2 => (500, 400.0, 0.95, 0.03),
        ScenarioName::QD1 => (2000, 5000.0, 0.999, 0.016),
        ScenarioName::QD2 => (2000, 10000.0, 0.999, 0.008),
        ScenarioName::Custom => return None,
    };
    Some(Preset { bath_size, omega0_mhz, delta_ratio, g_ratio })
}

/// Resolved scenario: dimensionless parameters plus the physical inputs they
/// came from, when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: ScenarioName,
    pub params: ModelParams,
    pub temperature_kelvin: Option<f64>,
    pub frequency: Option<(f64, FrequencyConvention)>,
}

impl Scenario {
    /// Preset with the shared calibration scaled to its bath frequency.
    pub fn preset(name: ScenarioName) -> Result<Scenario> {
        let p = preset(name).ok_or_else(|| Error::Config("custom scenarios have no preset".into()))?;
        let beta = scaled_reference_beta(p.bath_frequency_mhz())?;
        Ok(Scenario {
            name,
            params: ModelParams::new(p.bath_size, p.delta_ratio, p.g_ratio, beta)?,
            temperature_kelvin: None,
            frequency: Some((p.omega0_mhz, FrequencyConvention::Ordinary)),
        })
    }
}

/// `beta omega1` at which the exact thermal polarization of `bath_size`
/// spins equals `target`, to `1e-10` in polarization.
pub fn calibrate_beta(bath_size: usize, target: f64) -> Result<f64> {
    if bath_size == 0 {
        return Err(Error::Calibration("bath size must be at least 1".into()));
    }
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::Calibration(format!("target polarization {target} outside (0, 1)")));
    }
    let f = |b: f64| thermal_polarization_exact(bath_size, b) - target;
    let mut hi = 1e-6;
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Calibration(format!("target {target} not reachable")));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let value = f(mid);
        if value.abs() < 1e-12 {
            return Ok(mid);
        }
        if value < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    if f(mid).abs() < 1e-10 {
        Ok(mid)
    } else {
        Err(Error::Calibration(format!("bisection did not reach target {target}")))
    }
}

/// Shared calibration: `REFERENCE_POLARIZATION` for `REFERENCE_BATH_SIZE` spins.
pub fn reference_beta() -> f64 {
    static BETA: OnceLock<f64> = OnceLock::new();
    *BETA.get_or_init(|| {
        calibrate_beta(REFERENCE_BATH_SIZE, REFERENCE_POLARIZATION).expect("reference calibration is attainable")
    })
}

/// Reference calibration moved to another bath frequency at the same
/// temperature (`beta omega1` is proportional to `omega1`).
pub fn scaled_reference_beta(bath_frequency_mhz: f64) -> Result<f64> {
    if !(bath_frequency_mhz >= 0.0) {
        return Err(Error::Domain(format!("bath frequency {bath_frequency_mhz} is negative")));
    }
    Ok(reference_beta() * bath_frequency_mhz / REFERENCE_BATH_FREQUENCY_MHZ)
}
