//! Run configuration: flat `key = value` files, command-line overrides and
//! resolution of the thermal parameter.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::scenario::{calibrate_beta, preset, reference_beta, scaled_reference_beta, Scenario, ScenarioName};
use crate::error::{Error, Result};
use crate::exact::{Basis, Frame, HamiltonianSpec};
use crate::params::{thermal_parameter, FrequencyConvention, Interaction, ModelParams};
use crate::schedule::{IntervalRule, SearchConfig, Strategy};

/// Strategy family selected by the `strategy` key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrategyKind {
    Equal,
    Unequal,
    Numeric,
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "equal" => Ok(StrategyKind::Equal),
            "unequal" => Ok(StrategyKind::Unequal),
            "numeric" => Ok(StrategyKind::Numeric),
            other => Err(Error::Config(format!("unknown strategy '{other}'"))),
        }
    }
}

/// Where `beta omega1` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BetaSource {
    Direct(f64),
    Physical { temperature_kelvin: f64, omega0_mhz: f64, convention: FrequencyConvention },
    Calibration { target: f64, bath_size: usize },
    /// Shared reference calibration, scaled to the bath frequency when known.
    Default,
}

/// Every recognised configuration key.
pub const KEYS: &[&str] = &[
    "scenario",
    "M",
    "delta_ratio",
    "g_ratio",
    "beta_omega1",
    "temperature_K",
    "omega0_MHz",
    "angular_convention",
    "calibrate_polarization",
    "calibrate_M",
    "strategy",
    "rule",
    "L",
    "N",
    "window",
    "grid_points",
    "interaction",
    "basis",
    "frame",
    "output",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scenario: ScenarioName,
    pub bath_size: Option<usize>,
    pub delta_ratio: Option<f64>,
    pub g_ratio: Option<f64>,
    pub beta_omega1: Option<f64>,
    pub temperature_kelvin: Option<f64>,
    pub omega0_mhz: Option<f64>,
    pub angular_convention: bool,
    pub calibrate_polarization: Option<f64>,
    pub calibrate_bath_size: Option<usize>,
    pub strategy: StrategyKind,
    pub rule: IntervalRule,
    pub update_every: usize,
    pub rounds: usize,
    pub search: SearchConfig,
    pub interaction: Interaction,
    pub basis: Basis,
    pub frame: Option<Frame>,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: ScenarioName::Custom,
            bath_size: None,
            delta_ratio: None,
            g_ratio: None,
            beta_omega1: None,
            temperature_kelvin: None,
            omega0_mhz: None,
            angular_convention: false,
            calibrate_polarization: None,
            calibrate_bath_size: None,
            strategy: StrategyKind::Unequal,
            rule: IntervalRule::default(),
            update_every: 1,
            rounds: 20,
            search: SearchConfig::default(),
            interaction: Interaction::XY,
            basis: Basis::DickeSubspace,
            frame: None,
            output: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse '{value}' for key '{key}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("cannot parse '{value}' for key '{key}' as a boolean"))),
    }
}

/// Splits flat `key = value` text into pairs. Blank lines and `#` comments
/// are skipped; a key may appear only once.
pub fn parse_flat(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (number, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", number + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(Error::Config(format!("line {}: empty key or value", number + 1)));
        }
        if pairs.iter().any(|(k, _)| k == key) {
            return Err(Error::Config(format!("line {}: duplicate key '{key}'", number + 1)));
        }
        pairs.push((key.to_string(), value.to_string()));
    }
    Ok(pairs)
}

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut config = RunConfig::default();
        for (key, value) in parse_flat(text)? {
            config.set(&key, &value)?;
        }
        Ok(config)
    }
}

impl RunConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "scenario" => self.scenario = value.parse()?,
            "M" => self.bath_size = Some(parse_value(key, value)?),
            "delta_ratio" => self.delta_ratio = Some(parse_value(key, value)?),
            "g_ratio" => self.g_ratio = Some(parse_value(key, value)?),
            "beta_omega1" => self.beta_omega1 = Some(parse_value(key, value)?),
            "temperature_K" => self.temperature_kelvin = Some(parse_value(key, value)?),
            "omega0_MHz" => self.omega0_mhz = Some(parse_value(key, value)?),
            "angular_convention" => self.angular_convention = parse_bool(key, value)?,
            "calibrate_polarization" => self.calibrate_polarization = Some(parse_value(key, value)?),
            "calibrate_M" => self.calibrate_bath_size = Some(parse_value(key, value)?),
            "strategy" => self.strategy = value.parse()?,
            "rule" => self.rule = value.parse()?,
            "L" => self.update_every = parse_value(key, value)?,
            "N" => self.rounds = parse_value(key, value)?,
            "window" => self.search.window = parse_value(key, value)?,
            "grid_points" => self.search.grid_points = parse_value(key, value)?,
            "interaction" => self.interaction = value.parse()?,
            "basis" => self.basis = value.parse()?,
            "frame" => self.frame = Some(value.parse()?),
            "output" => self.output = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    fn omega0(&self) -> Option<f64> {
        self.omega0_mhz.or_else(|| preset(self.scenario).map(|p| p.omega0_mhz))
    }

    fn delta(&self) -> Result<f64> {
        self.delta_ratio
            .or_else(|| preset(self.scenario).map(|p| p.delta_ratio))
            .ok_or_else(|| Error::Config("delta_ratio is required for a custom scenario".into()))
    }

    /// The single source of `beta omega1`; more than one is a conflict.
    pub fn beta_source(&self) -> Result<BetaSource> {
        let mut sources = Vec::new();
        if let Some(b) = self.beta_omega1 {
            sources.push(BetaSource::Direct(b));
        }
        if let Some(t) = self.temperature_kelvin {
            let omega0_mhz = self
                .omega0()
                .ok_or_else(|| Error::Config("temperature_K needs omega0_MHz".into()))?;
            let convention =
                if self.angular_convention { FrequencyConvention::Angular } else { FrequencyConvention::Ordinary };
            sources.push(BetaSource::Physical { temperature_kelvin: t, omega0_mhz, convention });
        }
        if let Some(target) = self.calibrate_polarization {
            let bath_size = match self.calibrate_bath_size.or(self.bath_size) {
                Some(m) => m,
                None => self.params_without_beta()?.bath_size,
            };
            sources.push(BetaSource::Calibration { target, bath_size });
        }
        match sources.len() {
            0 => Ok(BetaSource::Default),
            1 => Ok(sources[0]),
            _ => Err(Error::Config(
                "conflicting thermal sources: give only one of beta_omega1, temperature_K, calibrate_polarization".into(),
            )),
        }
    }

    pub fn resolve_beta(&self) -> Result<f64> {
        match self.beta_source()? {
            BetaSource::Direct(b) => {
                if !(b >= 0.0) || !b.is_finite() {
                    return Err(Error::Config(format!("beta_omega1 must be finite and nonnegative, got {b}")));
                }
                Ok(b)
            }
            BetaSource::Physical { temperature_kelvin, omega0_mhz, convention } => {
                let omega1 = omega0_mhz * (1.0 - self.delta()?);
                thermal_parameter(omega1, convention, temperature_kelvin)
            }
            BetaSource::Calibration { target, bath_size } => calibrate_beta(bath_size, target),
            BetaSource::Default => match self.omega0() {
                Some(w0) => scaled_reference_beta(w0 * (1.0 - self.delta()?)),
                None => Ok(reference_beta()),
            },
        }
    }

    fn params_without_beta(&self) -> Result<ModelParams> {
        let base = preset(self.scenario);
        let bath_size = self
            .bath_size
            .or(base.map(|p| p.bath_size))
            .ok_or_else(|| Error::Config("M is required for a custom scenario".into()))?;
        let g = self
            .g_ratio
            .or(base.map(|p| p.g_ratio))
            .ok_or_else(|| Error::Config("g_ratio is required for a custom scenario".into()))?;
        let params = ModelParams::new(bath_size, self.delta()?, g, 0.0)
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(params.with_interaction(self.interaction))
    }

    pub fn resolve_params(&self) -> Result<ModelParams> {
        let beta = self.resolve_beta()?;
        Ok(self.params_without_beta()?.with_beta_omega1(beta))
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let frequency = self.omega0().map(|w| {
            let convention =
                if self.angular_convention { FrequencyConvention::Angular } else { FrequencyConvention::Ordinary };
            (w, convention)
        });
        Ok(Scenario {
            name: self.scenario,
            params: self.resolve_params()?,
            temperature_kelvin: self.temperature_kelvin,
            frequency,
        })
    }

    pub fn strategy(&self) -> Result<Strategy> {
        let strategy = match self.strategy {
            StrategyKind::Equal => Strategy::EqualSpacing,
            StrategyKind::Unequal => Strategy::UnequalSpacing { update_every: self.update_every, rule: self.rule },
            StrategyKind::Numeric => {
                Strategy::NumericOptimized { update_every: self.update_every, search: self.search }
            }
        };
        strategy.validate()?;
        Ok(strategy)
    }

    pub fn hamiltonian_spec(&self) -> Result<HamiltonianSpec> {
        let mut spec = HamiltonianSpec::new(self.resolve_params()?, self.basis);
        if let Some(frame) = self.frame {
            spec = spec.with_frame(frame);
        }
        spec.validate().map_err(|e| match e {
            Error::DimensionLimit { .. } => e,
            other => Error::Config(other.to_string()),
        })?;
        Ok(spec)
    }

    /// Resolved settings as `(key, value)` pairs for output metadata.
    pub fn describe(&self) -> Result<Vec<(String, String)>> {
        let p = self.resolve_params()?;
        let source = match self.beta_source()? {
            BetaSource::Direct(_) => "direct".to_string(),
            BetaSource::Physical { temperature_kelvin, omega0_mhz, convention } => {
                format!("T={temperature_kelvin}K omega0={omega0_mhz}MHz {convention:?}")
            }
            BetaSource::Calibration { target, bath_size } => format!("calibrated P_th={target} at M={bath_size}"),
            BetaSource::Default => "reference calibration".to_string(),
        };
        Ok(vec![
            ("scenario".into(), self.scenario.to_string()),
            ("beta_source".into(), source),
            ("M".into(), p.bath_size.to_string()),
            ("delta_ratio".into(), p.detuning.to_string()),
            ("g_ratio".into(), p.coupling.to_string()),
            ("beta_omega1".into(), p.beta_omega1.to_string()),
            ("interaction".into(), p.interaction.to_string()),
        ])
    }
}
