//! Measurement-interval selection and protocol execution.
//!
//! A protocol alternates free evolution for an interval `tau` with a
//! ground-state measurement of the central spin. Strategies differ only in
//! how each `tau` is chosen; the bookkeeping (polarization, entropy, success
//! probabilities, early termination) is shared by every simulator through
//! [`ConditionedModel`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{BathState, ReductionTable, apply_round};
use crate::error::{Error, Result};
use crate::optimize::{first_max, grid, refine_grid_max};
use crate::params::ModelParams;
use crate::trace::{Engine, ProtocolTrace, RoundRecord, StopReason};

/// Polarization degrees below this are treated as zero.
pub const POLARIZATION_FLOOR: f64 = 1e-12;

/// Iterative updates stop once `1 - P` falls below this.
pub const STOP_TOLERANCE: f64 = 1e-10;

/// How an unequal-spacing schedule recomputes its interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum IntervalRule {
    /// `1 / (g M sqrt(2 P (1 - P)))` from the current polarization degree.
    Polarization,
    /// `1 / (2 g sqrt(<J_+ J_->))` from the current bath state; reduces to the
    /// polarization formula for a thermal state of a large bath.
    #[default]
    CouplingMoment,
}

impl fmt::Display for IntervalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntervalRule::Polarization => "polarization",
            IntervalRule::CouplingMoment => "moment",
        })
    }
}

impl std::str::FromStr for IntervalRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "polarization" | "eq16" => Ok(IntervalRule::Polarization),
            "moment" | "coupling-moment" => Ok(IntervalRule::CouplingMoment),
            other => Err(Error::Config(format!("unknown interval rule '{other}'"))),
        }
    }
}

/// Settings of the numeric one-round look-ahead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// The scan covers `(0, window * tau_anchor]`.
    pub window: f64,
    pub grid_points: usize,
    /// Relative bracket width at which golden-section refinement stops.
    pub rel_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { window: 3.0, grid_points: 2000, rel_tol: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Strategy {
    /// Fixed interval from the initial thermal polarization.
    EqualSpacing,
    /// Interval recomputed at rounds `1, L+1, 2L+1, ...`.
    UnequalSpacing { update_every: usize, rule: IntervalRule },
    /// Interval chosen by maximizing the polarization after the next round.
    NumericOptimized { update_every: usize, search: SearchConfig },
    /// Caller-supplied intervals, one per round.
    Schedule(Vec<f64>),
}

impl Strategy {
    pub fn unequal(update_every: usize) -> Self {
        Strategy::UnequalSpacing { update_every, rule: IntervalRule::default() }
    }

    pub fn numeric() -> Self {
        Strategy::NumericOptimized { update_every: 1, search: SearchConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Strategy::UnequalSpacing { update_every: 0, .. }
            | Strategy::NumericOptimized { update_every: 0, .. } => {
                Err(Error::Config("update rate L must be at least 1".into()))
            }
            Strategy::NumericOptimized { search, .. } => {
                if !(search.window > 0.0) || search.grid_points == 0 || !(search.rel_tol > 0.0) {
                    Err(Error::Config(format!("invalid search settings {search:?}")))
                } else {
                    Ok(())
                }
            }
            Strategy::Schedule(taus) => {
                if taus.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
                    Err(Error::Config("scheduled intervals must be finite and nonnegative".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::EqualSpacing => f.write_str("equal"),
            Strategy::UnequalSpacing { update_every, rule } => {
                write!(f, "unequal(L={update_every},rule={rule})")
            }
            Strategy::NumericOptimized { update_every, search } => write!(
                f,
                "numeric(L={update_every},window={},grid={},tol={:e})",
                search.window, search.grid_points, search.rel_tol
            ),
            Strategy::Schedule(taus) => write!(f, "schedule({} intervals)", taus.len()),
        }
    }
}

/// Polarization degree of the thermal state with the level sums extended to
/// infinity: `1 - 2x / (M (1 - x))`, `x = exp(-beta omega1)`.
///
/// Only meaningful when `M beta omega1 >> 1`; otherwise the value can be far
/// off and even negative. It is returned unclamped.
pub fn thermal_polarization_closed_form(bath_size: usize, beta_omega1: f64) -> Result<f64> {
    if !(beta_omega1 > 0.0) {
        return Err(Error::Domain(format!(
            "closed-form thermal polarization needs beta*omega1 > 0, got {beta_omega1}"
        )));
    }
    let x = (-beta_omega1).exp();
    // 1 - x computed without cancellation
    let one_minus_x = -(-beta_omega1).exp_m1();
    Ok(1.0 - 2.0 * x / (bath_size as f64 * one_minus_x))
}

/// Exact polarization degree of the thermal state (finite level sum).
pub fn thermal_polarization_exact(bath_size: usize, beta_omega1: f64) -> f64 {
    let weights = (0..=bath_size).map(|m| (-beta_omega1 * m as f64).exp());
    let half = 0.5 * bath_size as f64;
    let (mut z, mut moment) = (0.0, 0.0);
    for (m, w) in weights.enumerate() {
        z += w;
        moment += w * (half - m as f64);
    }
    (moment / z).abs() / half
}

/// `1 / (g M sqrt(2 (1 - P) P))`
pub fn tau_opt_analytic(coupling: f64, bath_size: usize, polarization: f64) -> Result<f64> {
    if !(polarization > POLARIZATION_FLOOR && polarization < 1.0) {
        return Err(Error::Domain(format!(
            "analytic interval needs 0 < P < 1, got {polarization}"
        )));
    }
    if !(coupling > 0.0) || bath_size == 0 {
        return Err(Error::Domain("analytic interval needs g > 0 and M >= 1".into()));
    }
    let spread = 2.0 * (1.0 - polarization) * polarization;
    Ok(1.0 / (coupling * bath_size as f64 * spread.sqrt()))
}

/// Analytic interval re-evaluated at the current polarization. Signals
/// [`Error::Converged`] once `1 - P < STOP_TOLERANCE`, where the interval
/// diverges.
pub fn tau_opt_iterative(current_polarization: f64, coupling: f64, bath_size: usize) -> Result<f64> {
    let residual = 1.0 - current_polarization;
    if residual < STOP_TOLERANCE {
        return Err(Error::Converged { residual });
    }
    tau_opt_analytic(coupling, bath_size, current_polarization)
}

/// `1 / (2 g sqrt(moment))` with `moment = <J_+ J_->` of the current bath state.
pub fn tau_opt_moment(moment: f64, coupling: f64) -> Result<f64> {
    if !(moment > 0.0) {
        return Err(Error::Stalled { moment });
    }
    Ok(1.0 / (2.0 * coupling * moment.sqrt()))
}

/// `<J_+ J_->` for a diagonal collective state: `sum_m p_m m (M - m + 1)`.
pub fn collective_moment(state: &BathState) -> f64 {
    let big_m = state.bath_size();
    state
        .populations()
        .iter()
        .enumerate()
        .map(|(m, p)| p * (m * (big_m - m + 1)) as f64)
        .sum()
}

/// Interval used by the first round of the equal and unequal strategies.
pub fn seed_interval(params: &ModelParams) -> Result<f64> {
    let p_th = thermal_polarization_exact(params.bath_size, params.beta_omega1);
    tau_opt_iterative(p_th, params.coupling, params.bath_size)
}

/// A simulator that can run a conditioned evolution-and-measurement round.
pub trait ConditionedModel {
    type State: Clone;

    fn bath_size(&self) -> usize;
    fn coupling(&self) -> f64;
    fn polarization(&self, state: &Self::State) -> f64;
    fn entropy(&self, state: &Self::State) -> Result<f64>;
    /// `<J_+ J_->`
    fn flip_flop_moment(&self, state: &Self::State) -> f64;
    /// Evolve for `tau`, measure the central spin in `|g>`, renormalize.
    fn step(&self, state: &Self::State, tau: f64) -> Result<(Self::State, f64)>;
    /// Polarization after one more round, as a function of its interval.
    fn lookahead<'a>(&'a self, state: &'a Self::State) -> Result<Box<dyn Fn(f64) -> f64 + 'a>>;
    /// [`lookahead`](Self::lookahead) at many intervals at once.
    fn lookahead_many(&self, state: &Self::State, taus: &[f64]) -> Result<Vec<f64>> {
        let f = self.lookahead(state)?;
        Ok(taus.iter().map(|&t| f(t)).collect())
    }
    /// Bath populations by excitation number.
    fn excitation_populations(&self, state: &Self::State) -> Vec<f64>;
}

/// Closed-form model in the symmetric sector.
#[derive(Debug, Clone)]
pub struct ClosedFormModel {
    params: ModelParams,
    table: ReductionTable,
}

impl ClosedFormModel {
    pub fn new(params: &ModelParams) -> Self {
        ClosedFormModel { params: *params, table: ReductionTable::new(params) }
    }
}

impl ConditionedModel for ClosedFormModel {
    type State = BathState;

    fn bath_size(&self) -> usize {
        self.params.bath_size
    }

    fn coupling(&self) -> f64 {
        self.params.coupling
    }

    fn polarization(&self, state: &BathState) -> f64 {
        state.polarization()
    }

    fn entropy(&self, state: &BathState) -> Result<f64> {
        Ok(state.entropy())
    }

    fn flip_flop_moment(&self, state: &BathState) -> f64 {
        collective_moment(state)
    }

    fn step(&self, state: &BathState, tau: f64) -> Result<(BathState, f64)> {
        state.condition(&self.table.factors(tau))
    }

    fn lookahead<'a>(&'a self, state: &'a BathState) -> Result<Box<dyn Fn(f64) -> f64 + 'a>> {
        Ok(Box::new(move |tau| self.table.polarization_after(state, tau)))
    }

    fn excitation_populations(&self, state: &BathState) -> Vec<f64> {
        state.populations().to_vec()
    }
}

/// Numeric interval for any model: grid scan over `(0, W tau_anchor]` plus
/// golden-section refinement, smallest `tau` among equal maxima.
///
/// The anchor is the moment interval `1 / (2 g sqrt(<J_+ J_->))`, or
/// `1 / (g M)` when the moment vanishes.
pub fn numeric_interval<M: ConditionedModel>(
    model: &M,
    state: &M::State,
    search: &SearchConfig,
) -> Result<f64> {
    let current = model.polarization(state);
    let residual = 1.0 - current;
    if residual < STOP_TOLERANCE {
        return Err(Error::Converged { residual });
    }
    let moment = model.flip_flop_moment(state);
    let anchor = tau_opt_moment(moment, model.coupling())
        .unwrap_or(1.0 / (model.coupling() * model.bath_size() as f64));
    let hi = search.window * anchor;
    let xs = grid(hi, search.grid_points);
    let values = model.lookahead_many(state, &xs)?;
    let (k, coarse) = first_max(&xs, &values).ok_or_else(|| Error::Config("empty search grid".into()))?;
    let objective = model.lookahead(state)?;
    let best = refine_grid_max(&objective, hi, search.grid_points, k, coarse, search.rel_tol);
    if best.value - current <= 1e-14 && moment <= 0.0 {
        return Err(Error::Stalled { moment });
    }
    Ok(best.x)
}

/// Maximizer of the single-round polarization from `state`.
pub fn tau_opt_numeric(state: &BathState, params: &ModelParams) -> Result<f64> {
    tau_opt_numeric_with(state, params, &SearchConfig::default())
}

pub fn tau_opt_numeric_with(state: &BathState, params: &ModelParams, search: &SearchConfig) -> Result<f64> {
    if state.bath_size() != params.bath_size {
        return Err(Error::InvalidParams("state and model disagree on the bath size".into()));
    }
    numeric_interval(&ClosedFormModel::new(params), state, search)
}

fn choose_interval<M: ConditionedModel>(
    model: &M,
    state: &M::State,
    strategy: &Strategy,
    index: usize,
    previous: Option<f64>,
    seed: &dyn Fn() -> Result<f64>,
) -> Result<f64> {
    match strategy {
        Strategy::EqualSpacing => previous.map_or_else(seed, Ok),
        Strategy::Schedule(taus) => taus
            .get(index)
            .copied()
            .ok_or_else(|| Error::Config(format!("schedule has no interval for round {}", index + 1))),
        Strategy::UnequalSpacing { update_every, rule } => {
            if !index.is_multiple_of(*update_every) {
                if let Some(tau) = previous {
                    return Ok(tau);
                }
            }
            if index == 0 {
                return seed();
            }
            let current = model.polarization(state);
            let residual = 1.0 - current;
            if residual < STOP_TOLERANCE {
                return Err(Error::Converged { residual });
            }
            match rule {
                IntervalRule::Polarization => {
                    tau_opt_iterative(current, model.coupling(), model.bath_size())
                }
                IntervalRule::CouplingMoment => {
                    tau_opt_moment(model.flip_flop_moment(state), model.coupling())
                }
            }
        }
        Strategy::NumericOptimized { update_every, search } => {
            if !index.is_multiple_of(*update_every) {
                if let Some(tau) = previous {
                    return Ok(tau);
                }
            }
            numeric_interval(model, state, search)
        }
    }
}

/// Runs `rounds` rounds of `strategy` on `model` starting from `initial`.
///
/// Runtime signals (convergence, annihilation, a stalled optimizer) end the
/// trace early with the reason recorded; malformed input is an error.
pub fn run_schedule<M: ConditionedModel>(
    model: &M,
    initial: M::State,
    params: &ModelParams,
    strategy: &Strategy,
    rounds: usize,
    engine: Engine,
) -> Result<ProtocolTrace> {
    if rounds == 0 {
        return Err(Error::Domain("a protocol needs at least one round".into()));
    }
    strategy.validate()?;
    if let Strategy::Schedule(taus) = strategy {
        if taus.len() < rounds {
            return Err(Error::Config(format!(
                "schedule supplies {} intervals for {rounds} rounds",
                taus.len()
            )));
        }
    }
    let initial_polarization = model.polarization(&initial);
    let initial_entropy = model.entropy(&initial)?;
    let seed = || tau_opt_iterative(initial_polarization, model.coupling(), model.bath_size());

    let mut state = initial;
    let mut records = Vec::with_capacity(rounds);
    let mut previous = None;
    let mut cumulative = 1.0;
    let mut stop = None;

    for index in 0..rounds {
        let outcome = choose_interval(model, &state, strategy, index, previous, &seed)
            .and_then(|tau| model.step(&state, tau).map(|(next, p)| (tau, next, p)));
        let (tau, next, probability) = match outcome {
            Ok(v) => v,
            Err(e) => match StopReason::from_error(&e) {
                Some(reason) => {
                    stop = Some(reason);
                    break;
                }
                None => return Err(e),
            },
        };
        cumulative *= probability;
        records.push(RoundRecord {
            round: index + 1,
            tau,
            polarization: model.polarization(&next),
            entropy: model.entropy(&next)?,
            round_probability: probability,
            cumulative_probability: cumulative,
        });
        previous = Some(tau);
        state = next;
    }

    Ok(ProtocolTrace {
        params: *params,
        strategy: strategy.clone(),
        engine,
        initial_polarization,
        initial_entropy,
        rounds: records,
        stop,
        final_populations: model.excitation_populations(&state),
    })
}

/// Closed-form protocol starting from the thermal bath.
pub fn run_protocol(params: &ModelParams, strategy: &Strategy, rounds: usize) -> Result<ProtocolTrace> {
    params.validate()?;
    let model = ClosedFormModel::new(params);
    run_schedule(&model, BathState::thermal(params), params, strategy, rounds, Engine::ClosedForm)
}

/// Single-round polarization of the thermal bath at each interval of `taus`.
pub fn sweep_tau(params: &ModelParams, taus: &[f64]) -> Result<Vec<(f64, f64)>> {
    params.validate()?;
    if taus.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Domain("sweep intervals must be positive".into()));
    }
    if taus.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("sweep intervals must be increasing".into()));
    }
    let state = BathState::thermal(params);
    let table = ReductionTable::new(params);
    Ok(taus.iter().map(|&t| (t, table.polarization_after(&state, t))).collect())
}

/// Conditioned state and success probability after applying `taus` in order,
/// one [`apply_round`] per interval.
pub fn apply_schedule(params: &ModelParams, taus: &[f64]) -> Result<(BathState, f64)> {
    let mut state = BathState::thermal(params);
    let mut cumulative = 1.0;
    for &tau in taus {
        let (next, p) = apply_round(&state, tau, params)?;
        cumulative *= p;
        state = next;
    }
    Ok((state, cumulative))
}
