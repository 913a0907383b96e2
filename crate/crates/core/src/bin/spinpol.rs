//! Command-line front end for the `spinpol` library.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use spinpol::algebra::coefficient_profile;
use spinpol::exact::run_exact_protocol;
use spinpol::harness::csv::write_atomic;
use spinpol::harness::{
    calibrate_beta, format_sig, run_figure, write_trace_csv, worker_count, FigureId, FigureOptions, RunConfig,
    ScenarioName, Table,
};
use spinpol::trace::StopReason;
use spinpol::schedule::sweep_tau;
use spinpol::{run_protocol, Error, ProtocolTrace};

#[derive(Parser)]
#[command(name = "spinpol", version, about = "Central-spin bath polarization by repeated measurement")]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one configuration key (repeatable), e.g. `--set M=700`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Write CSV here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single- and multi-round reduction factors per Dicke level.
    Coeffs {
        #[arg(long)]
        tau: f64,
        #[arg(long, default_value_t = 1)]
        rounds: u32,
    },
    /// Single-round polarization over an evenly spaced interval grid.
    SweepTau {
        #[arg(long)]
        max: f64,
        #[arg(long, default_value_t = 1000)]
        points: usize,
    },
    /// Closed-form protocol run.
    Run,
    /// Closed-form protocol run on a named preset (NV1, NV2, QD1, QD2).
    Scenario { name: ScenarioName },
    /// Protocol run on the dense simulator.
    Exact,
    /// Regenerate the data behind a figure (fig2 ... fig9).
    Figure {
        id: FigureId,
        /// Directory receiving one CSV per table.
        #[arg(long, default_value = "figures")]
        out_dir: PathBuf,
    },
    /// Thermal parameter reproducing a target polarization.
    Calibrate {
        #[arg(long)]
        target: f64,
        #[arg(long = "bath-size", short = 'M')]
        bath_size: usize,
    },
}

enum Outcome {
    Done,
    Signal(String),
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    for item in &cli.overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override '{item}' is not KEY=VALUE")))?;
        config.set(key.trim(), value.trim())?;
    }
    if let Some(path) = &cli.output {
        config.output = Some(path.clone());
    }
    Ok(config)
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => write_atomic(path, text.as_bytes()).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_trace(config: &RunConfig, trace: &ProtocolTrace) -> Result<Outcome> {
    if let (true, Some(stop)) = (trace.is_empty(), trace.stop) {
        return Ok(Outcome::Signal(format!("no round was run: {stop}")));
    }
    let mut buffer = Vec::new();
    let extra = config.describe()?.into_iter().filter(|(k, _)| k == "scenario" || k == "beta_source").collect::<Vec<_>>();
    write_trace_csv(trace, &extra, &mut buffer)?;
    emit(config.output.as_ref(), std::str::from_utf8(&buffer)?)?;
    Ok(match trace.stop {
        Some(stop @ (StopReason::Annihilated { .. } | StopReason::Stalled { .. })) => {
            Outcome::Signal(format!("run stopped after {} rounds: {stop}", trace.len()))
        }
        Some(stop @ StopReason::Converged { .. }) => {
            eprintln!("run ended after {} rounds: {stop}", trace.len());
            Outcome::Done
        }
        None => Outcome::Done,
    })
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let mut config = load_config(cli)?;
    match &cli.command {
        Command::Coeffs { tau, rounds } => {
            let params = config.resolve_params()?;
            let single = coefficient_profile(&params, *tau, 1)?;
            let repeated = coefficient_profile(&params, *tau, *rounds)?;
            let mut t = Table::new("coeffs", &["m", "alpha_sq", "alpha_sq_n"]);
            for (k, v) in config.describe()? {
                t.meta(&k, v);
            }
            t.meta("tau", tau).meta("N", rounds);
            for (m, (a, b)) in single.values.iter().zip(&repeated.values).enumerate() {
                t.push(vec![m.to_string(), format_sig(*a), format_sig(*b)]);
            }
            emit(config.output.as_ref(), &t.render())?;
        }
        Command::SweepTau { max, points } => {
            if *points == 0 || max.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::Config("sweep needs --max > 0 and --points > 0".into()).into());
            }
            let params = config.resolve_params()?;
            let taus: Vec<f64> = (1..=*points).map(|k| max * k as f64 / *points as f64).collect();
            let mut t = Table::new("sweep", &["tau", "polarization"]);
            for (k, v) in config.describe()? {
                t.meta(&k, v);
            }
            for (tau, pol) in sweep_tau(&params, &taus)? {
                t.push(vec![format_sig(tau), format_sig(pol)]);
            }
            emit(config.output.as_ref(), &t.render())?;
        }
        Command::Run => {
            let trace = run_protocol(&config.resolve_params()?, &config.strategy()?, config.rounds)?;
            return emit_trace(&config, &trace);
        }
        Command::Scenario { name } => {
            if *name == ScenarioName::Custom {
                return Err(Error::Config("choose one of NV1, NV2, QD1, QD2".into()).into());
            }
            config.scenario = *name;
            let trace = run_protocol(&config.resolve_params()?, &config.strategy()?, config.rounds)?;
            return emit_trace(&config, &trace);
        }
        Command::Exact => {
            let trace = run_exact_protocol(&config.hamiltonian_spec()?, &config.strategy()?, config.rounds)?;
            return emit_trace(&config, &trace);
        }
        Command::Figure { id, out_dir } => {
            let opts = FigureOptions { workers: worker_count()?, beta_omega1: config.beta_omega1 };
            for table in run_figure(*id, &opts)? {
                let path = table.write_to_dir(out_dir)?;
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Calibrate { target, bath_size } => {
            let beta = calibrate_beta(*bath_size, *target)?;
            emit(config.output.as_ref(), &format!("{}\n", format_sig(beta)))?;
        }
    }
    Ok(Outcome::Done)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_runtime_signal() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Signal(message)) => {
            eprintln!("{message}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
