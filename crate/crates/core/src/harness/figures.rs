//! Parameter sets and CSV tables for the standard figure data sets.
//!
//! Every `figN_*` function returns typed results so they can be checked
//! programmatically; [`run_figure`] renders them as [`Table`]s. Output is
//! deterministic: no timings or timestamps are written.

use std::fmt;
use std::str::FromStr;

use super::csv::{format_sig, Table};
use super::parallel_map;
use super::scenario::{reference_beta, Scenario, ScenarioName, REFERENCE_BATH_FREQUENCY_MHZ};
use crate::algebra::{apply_round, coefficient_profile, BathState};
use crate::error::{Error, Result};
use crate::exact::{run_exact_protocol, Basis, HamiltonianSpec};
use crate::params::{Interaction, ModelParams};
use crate::schedule::{
    run_protocol, seed_interval, thermal_polarization_exact, tau_opt_analytic, tau_opt_numeric, Strategy,
};
use crate::trace::ProtocolTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
    ];
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = FigureId::ALL.iter().position(|x| x == self).unwrap_or(0) + 2;
        write!(f, "fig{n}")
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim().to_ascii_lowercase();
        let digits = digits.strip_prefix("fig").unwrap_or(&digits);
        match digits.parse::<usize>() {
            Ok(n @ 2..=9) => Ok(FigureId::ALL[n - 2]),
            _ => Err(Error::Config(format!("unknown figure '{s}' (expected fig2 ... fig9)"))),
        }
    }
}

/// Overrides shared by all figure commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOptions {
    pub workers: usize,
    /// Replaces the reference calibration; scenario-specific values are
    /// scaled from it by bath frequency.
    pub beta_omega1: Option<f64>,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions { workers: 1, beta_omega1: None }
    }
}

impl FigureOptions {
    pub fn from_env() -> Result<Self> {
        Ok(FigureOptions { workers: super::worker_count()?, beta_omega1: None })
    }

    pub fn beta(&self) -> f64 {
        self.beta_omega1.unwrap_or_else(reference_beta)
    }

    /// Thermal parameter at another bath frequency, same temperature.
    pub fn beta_at(&self, bath_frequency_mhz: f64) -> f64 {
        self.beta() * bath_frequency_mhz / REFERENCE_BATH_FREQUENCY_MHZ
    }
}

/// Central-spin frequency assumed for the near-resonant figures.
pub const NEAR_RESONANT_OMEGA0_MHZ: f64 = 120.0;

fn near_resonant(bath_size: usize, delta: f64, g: f64, beta: f64) -> Result<ModelParams> {
    ModelParams::new(bath_size, delta, g, beta)
}

fn trace_header(labels: &[&str]) -> Vec<String> {
    labels
        .iter()
        .copied()
        .chain(["round", "tau", "polarization", "entropy", "round_prob", "cumulative_prob"])
        .map(String::from)
        .collect()
}

fn push_trace(table: &mut Table, labels: &[String], trace: &ProtocolTrace) {
    let mut initial = labels.to_vec();
    initial.extend([
        "0".into(),
        "0".into(),
        format_sig(trace.initial_polarization),
        format_sig(trace.initial_entropy),
        "1".into(),
        "1".into(),
    ]);
    table.push(initial);
    for r in &trace.rounds {
        let mut row = labels.to_vec();
        row.extend([
            r.round.to_string(),
            format_sig(r.tau),
            format_sig(r.polarization),
            format_sig(r.entropy),
            format_sig(r.round_probability),
            format_sig(r.cumulative_probability),
        ]);
        table.push(row);
    }
}

fn trace_table(name: &str, labels: &[&str]) -> Table {
    let mut t = Table::new(name, &[]);
    t.header = trace_header(labels);
    t
}

// ---------------------------------------------------------------- fig2

pub const FIG2_BATH_SIZE: usize = 700;
pub const FIG2_TAU: f64 = 0.03;
pub const FIG2_ROUNDS: u32 = 10;

pub fn fig2(opts: &FigureOptions) -> Result<Vec<Table>> {
    let p = near_resonant(FIG2_BATH_SIZE, 0.1, 0.1, opts.beta())?;
    let single = coefficient_profile(&p, FIG2_TAU, 1)?;
    let repeated = coefficient_profile(&p, FIG2_TAU, FIG2_ROUNDS)?;
    let mut t = Table::new("fig2", &["m", "alpha_sq", "alpha_sq_n"]);
    t.meta("M", p.bath_size).meta("delta_ratio", p.detuning).meta("g_ratio", p.coupling);
    t.meta("tau", FIG2_TAU).meta("N", FIG2_ROUNDS);
    for (m, (a, b)) in single.values.iter().zip(&repeated.values).enumerate() {
        t.push(vec![m.to_string(), format_sig(*a), format_sig(*b)]);
    }
    Ok(vec![t])
}

// ---------------------------------------------------------------- fig3

pub const FIG3_BATH_SIZE: usize = 700;
pub const FIG3_COUPLING: f64 = 0.1;
pub const FIG3_GRID_POINTS: usize = 2000;
/// The single-round scan covers `(0, FIG3_SPAN * tau_opt]`.
pub const FIG3_SPAN: f64 = 5.0;

/// Analytic interval against the numeric single-round maximizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalError {
    pub bath_size: usize,
    pub analytic: f64,
    pub numeric: f64,
    pub relative_error: f64,
}

pub fn interval_error(params: &ModelParams) -> Result<IntervalError> {
    let p_th = thermal_polarization_exact(params.bath_size, params.beta_omega1);
    let analytic = tau_opt_analytic(params.coupling, params.bath_size, p_th)?;
    let numeric = tau_opt_numeric(&BathState::thermal(params), params)?;
    Ok(IntervalError {
        bath_size: params.bath_size,
        analytic,
        numeric,
        relative_error: (analytic - numeric).abs() / numeric,
    })
}

/// Inset sizes: `M = 100, 120, ..., 1000`.
pub fn fig3_inset_sizes() -> Vec<usize> {
    (100..=1000).step_by(20).collect()
}

pub fn fig3_inset(opts: &FigureOptions, sizes: &[usize]) -> Result<Vec<IntervalError>> {
    let beta = opts.beta();
    parallel_map(opts.workers, sizes, |&m| interval_error(&near_resonant(m, 0.1, FIG3_COUPLING, beta)?))
}

pub fn fig3(opts: &FigureOptions) -> Result<Vec<Table>> {
    let p = near_resonant(FIG3_BATH_SIZE, 0.1, FIG3_COUPLING, opts.beta())?;
    let marker = interval_error(&p)?;
    let thermal = BathState::thermal(&p);
    let hi = FIG3_SPAN * marker.analytic;
    let mut main = Table::new("fig3", &["tau", "polarization", "round_prob"]);
    main.meta("M", p.bath_size).meta("delta_ratio", p.detuning).meta("g_ratio", p.coupling);
    main.meta("beta_omega1", p.beta_omega1);
    main.meta("tau_analytic", format_sig(marker.analytic));
    main.meta("tau_numeric", format_sig(marker.numeric));
    main.meta("grid", format!("{FIG3_GRID_POINTS} points on (0, {FIG3_SPAN} tau_analytic]"));
    for k in 1..=FIG3_GRID_POINTS {
        let tau = hi * k as f64 / FIG3_GRID_POINTS as f64;
        let (state, prob) = apply_round(&thermal, tau, &p)?;
        main.push(vec![format_sig(tau), format_sig(state.polarization()), format_sig(prob)]);
    }
    let mut inset = Table::new("fig3_inset", &["M", "tau_analytic", "tau_numeric", "relative_error"]);
    inset.meta("delta_ratio", p.detuning).meta("g_ratio", p.coupling).meta("beta_omega1", p.beta_omega1);
    for e in fig3_inset(opts, &fig3_inset_sizes())? {
        inset.push(vec![
            e.bath_size.to_string(),
            format_sig(e.analytic),
            format_sig(e.numeric),
            format_sig(e.relative_error),
        ]);
    }
    Ok(vec![main, inset])
}

// ---------------------------------------------------------------- fig4

pub const FIG4_SIZES: [usize; 4] = [600, 700, 800, 900];
pub const FIG4_ROUNDS: usize = 200;
pub const NEAR_RESONANT_COUPLING: f64 = 0.03;

pub fn fig4_traces(opts: &FigureOptions, rounds: usize) -> Result<Vec<ProtocolTrace>> {
    let beta = opts.beta();
    parallel_map(opts.workers, &FIG4_SIZES, |&m| {
        run_protocol(&near_resonant(m, 0.1, NEAR_RESONANT_COUPLING, beta)?, &Strategy::EqualSpacing, rounds)
    })
}

/// For every pair of curves, the first round at which their order flips
/// relative to round 0. Pairs that never cross are skipped.
pub fn crossing_rounds(traces: &[ProtocolTrace]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, a) in traces.iter().enumerate() {
        for b in &traces[i + 1..] {
            let start = (a.initial_polarization - b.initial_polarization).signum();
            let flip = a
                .rounds
                .iter()
                .zip(&b.rounds)
                .find(|(x, y)| (x.polarization - y.polarization).signum() != start)
                .map(|(x, _)| x.round);
            out.extend(flip);
        }
    }
    out
}

pub fn fig4(opts: &FigureOptions) -> Result<Vec<Table>> {
    let traces = fig4_traces(opts, FIG4_ROUNDS)?;
    let mut t = trace_table("fig4", &["M"]);
    t.meta("delta_ratio", 0.1).meta("g_ratio", NEAR_RESONANT_COUPLING).meta("beta_omega1", opts.beta());
    t.meta("strategy", Strategy::EqualSpacing);
    let crossings = crossing_rounds(&traces);
    let joined: Vec<String> = crossings.iter().map(|c| c.to_string()).collect();
    t.meta("crossing_rounds", joined.join(" "));
    for trace in &traces {
        push_trace(&mut t, &[trace.params.bath_size.to_string()], trace);
    }
    Ok(vec![t])
}

// ---------------------------------------------------------------- fig5

pub const FIG5_BATH_SIZE: usize = 700;
pub const FIG5_ROUNDS: usize = 20;
/// Update rates; `None` is equal spacing.
pub const FIG5_RATES: [Option<usize>; 5] = [None, Some(10), Some(5), Some(2), Some(1)];

pub fn fig5_strategy(rate: Option<usize>) -> Strategy {
    rate.map_or(Strategy::EqualSpacing, Strategy::unequal)
}

pub fn fig5_traces(opts: &FigureOptions, rounds: usize) -> Result<Vec<(Option<usize>, ProtocolTrace)>> {
    let p = near_resonant(FIG5_BATH_SIZE, 0.1, NEAR_RESONANT_COUPLING, opts.beta())?;
    let traces = parallel_map(opts.workers, &FIG5_RATES, |&rate| run_protocol(&p, &fig5_strategy(rate), rounds))?;
    Ok(FIG5_RATES.into_iter().zip(traces).collect())
}

pub fn fig5(opts: &FigureOptions) -> Result<Vec<Table>> {
    let mut t = trace_table("fig5", &["L"]);
    t.meta("M", FIG5_BATH_SIZE).meta("delta_ratio", 0.1).meta("g_ratio", NEAR_RESONANT_COUPLING);
    t.meta("beta_omega1", opts.beta());
    for (rate, trace) in fig5_traces(opts, FIG5_ROUNDS)? {
        let label = rate.map_or("inf".to_string(), |l| l.to_string());
        t.meta(&format!("strategy_L_{label}"), &trace.strategy);
        push_trace(&mut t, &[label], &trace);
    }
    Ok(vec![t])
}

// ---------------------------------------------------------------- fig6

pub const FIG6_ROUNDS: usize = 15;

pub fn fig6_scenario(opts: &FigureOptions, name: ScenarioName) -> Result<Scenario> {
    let mut s = Scenario::preset(name)?;
    if opts.beta_omega1.is_some() {
        let p = super::scenario::preset(name).expect("preset");
        s.params.beta_omega1 = opts.beta_at(p.bath_frequency_mhz());
    }
    Ok(s)
}

pub fn fig6_traces(opts: &FigureOptions, rounds: usize) -> Result<Vec<(ScenarioName, ProtocolTrace)>> {
    let traces = parallel_map(opts.workers, &ScenarioName::PRESETS, |&name| {
        run_protocol(&fig6_scenario(opts, name)?.params, &Strategy::numeric(), rounds)
    })?;
    Ok(ScenarioName::PRESETS.into_iter().zip(traces).collect())
}

pub fn fig6(opts: &FigureOptions) -> Result<Vec<Table>> {
    let mut t = trace_table("fig6", &["scenario", "M", "delta_ratio", "g_ratio", "beta_omega1"]);
    t.meta("strategy", Strategy::numeric());
    for (name, trace) in fig6_traces(opts, FIG6_ROUNDS)? {
        let p = trace.params;
        let labels = [
            name.to_string(),
            p.bath_size.to_string(),
            p.detuning.to_string(),
            p.coupling.to_string(),
            format_sig(p.beta_omega1),
        ];
        push_trace(&mut t, &labels, &trace);
    }
    Ok(vec![t])
}

// ---------------------------------------------------------------- fig7

/// One point of the success-probability study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessPoint {
    pub bath_size: usize,
    pub equal_spacing: bool,
    pub rounds: usize,
    pub success_probability: f64,
    pub polarization: f64,
}

pub const FIG7_CHECKPOINTS: [usize; 2] = [20, 50];

pub fn fig7_sizes() -> Vec<usize> {
    (10..=300).step_by(10).collect()
}

fn sample(trace: &ProtocolTrace, round: usize) -> Result<(f64, f64)> {
    match trace.rounds.get(round - 1) {
        Some(r) => Ok((r.cumulative_probability, r.polarization)),
        // a converged trace needs no further measurements
        None if matches!(trace.stop, Some(crate::trace::StopReason::Converged { .. })) => {
            Ok((trace.final_success_probability(), trace.final_polarization()))
        }
        None => Err(Error::Domain(format!("trace ended before round {round}: {:?}", trace.stop))),
    }
}

pub fn fig7_points(opts: &FigureOptions, sizes: &[usize], checkpoints: &[usize]) -> Result<Vec<SuccessPoint>> {
    let rounds = checkpoints.iter().copied().max().unwrap_or(1);
    let beta = opts.beta();
    let jobs: Vec<(usize, bool)> = sizes.iter().flat_map(|&m| [(m, true), (m, false)]).collect();
    let per_job = parallel_map(opts.workers, &jobs, |&(m, equal)| {
        let p = near_resonant(m, 0.1, NEAR_RESONANT_COUPLING, beta)?;
        let strategy = if equal { Strategy::EqualSpacing } else { Strategy::unequal(1) };
        let trace = run_protocol(&p, &strategy, rounds)?;
        checkpoints
            .iter()
            .map(|&n| {
                let (success_probability, polarization) = sample(&trace, n)?;
                Ok(SuccessPoint { bath_size: m, equal_spacing: equal, rounds: n, success_probability, polarization })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(per_job.into_iter().flatten().collect())
}

pub fn fig7(opts: &FigureOptions) -> Result<Vec<Table>> {
    let mut t = Table::new("fig7", &["M", "strategy", "N", "success_prob", "polarization"]);
    t.meta("delta_ratio", 0.1).meta("g_ratio", NEAR_RESONANT_COUPLING).meta("beta_omega1", opts.beta());
    t.meta("unequal_strategy", Strategy::unequal(1));
    for point in fig7_points(opts, &fig7_sizes(), &FIG7_CHECKPOINTS)? {
        t.push(vec![
            point.bath_size.to_string(),
            if point.equal_spacing { "equal" } else { "unequal" }.to_string(),
            point.rounds.to_string(),
            format_sig(point.success_probability),
            format_sig(point.polarization),
        ]);
    }
    Ok(vec![t])
}

// ---------------------------------------------------------------- fig8

pub const FIG8_BATH_SIZE: usize = 500;
pub const FIG8_ROUNDS: usize = 20;
pub const FIG8_DETUNINGS: [f64; 2] = [0.1, 0.95];
pub const FIG8_INTERACTIONS: [Interaction; 3] = [Interaction::XY, Interaction::XX, Interaction::XYZ];

pub fn fig8_spec(opts: &FigureOptions, interaction: Interaction, delta: f64) -> Result<HamiltonianSpec> {
    let beta = opts.beta_at(NEAR_RESONANT_OMEGA0_MHZ * (1.0 - delta));
    let p = near_resonant(FIG8_BATH_SIZE, delta, NEAR_RESONANT_COUPLING, beta)?.with_interaction(interaction);
    Ok(HamiltonianSpec::new(p, Basis::DickeSubspace))
}

pub fn fig8_traces(opts: &FigureOptions, rounds: usize) -> Result<Vec<(Interaction, f64, ProtocolTrace)>> {
    let cases: Vec<(Interaction, f64)> = FIG8_DETUNINGS
        .iter()
        .flat_map(|&d| FIG8_INTERACTIONS.iter().map(move |&i| (i, d)))
        .collect();
    let traces = parallel_map(opts.workers, &cases, |&(interaction, delta)| {
        run_exact_protocol(&fig8_spec(opts, interaction, delta)?, &Strategy::numeric(), rounds)
    })?;
    Ok(cases.into_iter().zip(traces).map(|((i, d), t)| (i, d, t)).collect())
}

pub fn fig8(opts: &FigureOptions) -> Result<Vec<Table>> {
    let mut t = trace_table("fig8", &["interaction", "delta_ratio", "frame", "beta_omega1"]);
    t.meta("M", FIG8_BATH_SIZE).meta("g_ratio", NEAR_RESONANT_COUPLING).meta("strategy", Strategy::numeric());
    for (interaction, delta, trace) in fig8_traces(opts, FIG8_ROUNDS)? {
        let frame = match trace.engine {
            crate::trace::Engine::Exact { frame, .. } => frame.to_string(),
            crate::trace::Engine::ClosedForm => "closed-form".into(),
        };
        let labels = [interaction.to_string(), delta.to_string(), frame, format_sig(trace.params.beta_omega1)];
        push_trace(&mut t, &labels, &trace);
    }
    Ok(vec![t])
}

// ---------------------------------------------------------------- fig9

pub const FIG9_BATH_SIZE: usize = 8;
pub const FIG9_ROUNDS: usize = 60;

pub fn fig9_traces(opts: &FigureOptions, rounds: usize) -> Result<Vec<(Basis, ProtocolTrace)>> {
    let p = near_resonant(FIG9_BATH_SIZE, 0.1, NEAR_RESONANT_COUPLING, opts.beta())?;
    let bases = [Basis::DickeSubspace, Basis::FullProductSpace];
    let traces = parallel_map(opts.workers, &bases, |&basis| {
        run_exact_protocol(&HamiltonianSpec::new(p, basis), &Strategy::unequal(1), rounds)
    })?;
    Ok(bases.into_iter().zip(traces).collect())
}

pub fn fig9(opts: &FigureOptions) -> Result<Vec<Table>> {
    let mut t = trace_table("fig9", &["basis"]);
    t.meta("M", FIG9_BATH_SIZE).meta("delta_ratio", 0.1).meta("g_ratio", NEAR_RESONANT_COUPLING);
    t.meta("beta_omega1", opts.beta()).meta("strategy", Strategy::unequal(1));
    for (basis, trace) in fig9_traces(opts, FIG9_ROUNDS)? {
        if let Some(stop) = trace.stop {
            t.meta(&format!("stop_{basis}"), stop);
        }
        push_trace(&mut t, &[basis.to_string()], &trace);
    }
    Ok(vec![t])
}

/// Runs the parameter set of figure `id`.
pub fn run_figure(id: FigureId, opts: &FigureOptions) -> Result<Vec<Table>> {
    let mut tables = match id {
        FigureId::Fig2 => fig2(opts)?,
        FigureId::Fig3 => fig3(opts)?,
        FigureId::Fig4 => fig4(opts)?,
        FigureId::Fig5 => fig5(opts)?,
        FigureId::Fig6 => fig6(opts)?,
        FigureId::Fig7 => fig7(opts)?,
        FigureId::Fig8 => fig8(opts)?,
        FigureId::Fig9 => fig9(opts)?,
    };
    for t in &mut tables {
        t.metadata.insert(0, ("version".into(), env!("CARGO_PKG_VERSION").into()));
        t.metadata.insert(1, ("figure".into(), id.to_string()));
    }
    Ok(tables)
}

/// First-round interval of the equal-spacing runs in [`fig4`].
pub fn fig4_interval(opts: &FigureOptions, bath_size: usize) -> Result<f64> {
    seed_interval(&near_resonant(bath_size, 0.1, NEAR_RESONANT_COUPLING, opts.beta())?)
}
