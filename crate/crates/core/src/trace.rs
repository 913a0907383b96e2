//! Per-round records of a measurement protocol.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exact::{Basis, Frame};
use crate::params::ModelParams;
use crate::schedule::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    /// 1-based round index.
    pub round: usize,
    pub tau: f64,
    pub polarization: f64,
    pub entropy: f64,
    pub round_probability: f64,
    pub cumulative_probability: f64,
}

/// Why a trace ended before the requested number of rounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StopReason {
    /// Polarization within the stopping tolerance of one.
    Converged { residual: f64 },
    /// Success probability underflowed.
    Annihilated { probability: f64 },
    /// No interval can move the remaining population.
    Stalled { moment: f64 },
}

impl StopReason {
    pub fn from_error(err: &Error) -> Option<Self> {
        match *err {
            Error::Converged { residual } => Some(StopReason::Converged { residual }),
            Error::Annihilated { probability } => Some(StopReason::Annihilated { probability }),
            Error::Stalled { moment } => Some(StopReason::Stalled { moment }),
            _ => None,
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopReason::Converged { residual } => write!(f, "converged (1-P={residual:e})"),
            StopReason::Annihilated { probability } => {
                write!(f, "annihilated (P={probability:e})")
            }
            StopReason::Stalled { moment } => write!(f, "stalled (<J+J->={moment:e})"),
        }
    }
}

/// Which simulator produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Engine {
    ClosedForm,
    Exact { basis: Basis, frame: Frame },
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Engine::ClosedForm => f.write_str("closed-form"),
            Engine::Exact { basis, frame } => write!(f, "exact/{basis}/{frame}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTrace {
    pub params: ModelParams,
    pub strategy: Strategy,
    pub engine: Engine,
    pub initial_polarization: f64,
    pub initial_entropy: f64,
    pub rounds: Vec<RoundRecord>,
    pub stop: Option<StopReason>,
    /// Bath populations (diagonal of the bath state in the excitation basis)
    /// after the last completed round.
    pub final_populations: Vec<f64>,
}

impl ProtocolTrace {
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn taus(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.tau).collect()
    }

    /// Polarization after `round` rounds (`0` gives the initial value).
    pub fn polarization_at(&self, round: usize) -> Option<f64> {
        if round == 0 {
            return Some(self.initial_polarization);
        }
        self.rounds.get(round - 1).map(|r| r.polarization)
    }

    /// Like [`polarization_at`](Self::polarization_at), but a converged trace
    /// keeps its last value for every later round.
    pub fn polarization_or_saturated(&self, round: usize) -> Option<f64> {
        match self.polarization_at(round) {
            Some(p) => Some(p),
            None if matches!(self.stop, Some(StopReason::Converged { .. })) => {
                Some(self.rounds.last().map_or(self.initial_polarization, |r| r.polarization))
            }
            None => None,
        }
    }

    pub fn entropy_at(&self, round: usize) -> Option<f64> {
        if round == 0 {
            return Some(self.initial_entropy);
        }
        self.rounds.get(round - 1).map(|r| r.entropy)
    }

    pub fn final_polarization(&self) -> f64 {
        self.rounds.last().map_or(self.initial_polarization, |r| r.polarization)
    }

    pub fn final_success_probability(&self) -> f64 {
        self.rounds.last().map_or(1.0, |r| r.cumulative_probability)
    }

    /// First round whose polarization exceeds `threshold`.
    pub fn first_round_above(&self, threshold: f64) -> Option<usize> {
        self.rounds
            .iter()
            .find(|r| r.polarization > threshold)
            .map(|r| r.round)
    }
}
