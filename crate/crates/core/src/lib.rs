//! Simulation of measurement-induced polarization of a spin bath coupled to
//! a repeatedly measured central spin.
//!
//! * [`algebra`]: closed-form conditioned dynamics in the symmetric sector.
//! * [`schedule`]: interval strategies and protocol execution.
//! * [`exact`]: dense simulation for XY, XX and XYZ couplings.
//! * [`harness`]: scenarios, calibration, configuration and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod exact;
pub mod harness;
pub mod optimize;
pub mod params;
pub mod schedule;
pub mod trace;

pub use algebra::BathState;
pub use error::{Error, Result};
pub use params::{Interaction, ModelParams};
pub use schedule::{run_protocol, IntervalRule, SearchConfig, Strategy};
pub use trace::{ProtocolTrace, RoundRecord, StopReason};
