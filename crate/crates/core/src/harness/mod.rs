//! Scenario presets, run configuration, CSV output and figure data sets.

pub mod config;
pub mod csv;
pub mod figures;
pub mod scenario;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub use config::{BetaSource, RunConfig, StrategyKind};
pub use csv::{emit_trace_csv, format_sig, parse_trace_csv, write_trace_csv, Table};
pub use figures::{run_figure, FigureId, FigureOptions};
pub use scenario::{calibrate_beta, reference_beta, Scenario, ScenarioName};

/// Environment variable holding the worker count for fan-out runs.
pub const WORKERS_ENV: &str = "SPINPOL_WORKERS";

/// Worker count from [`WORKERS_ENV`], defaulting to the available cores.
pub fn worker_count() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(value) => match value.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Config(format!("{WORKERS_ENV} must be a positive integer, got '{value}'"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Maps `f` over `items` on a pool of `workers` threads, keeping input order.
pub fn parallel_map<T, R, F>(workers: usize, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_map_keeps_order_and_errors() {
        let items: Vec<u32> = (0..50).collect();
        let out = parallel_map(3, &items, |x| Ok(x * 2)).unwrap();
        assert_eq!(out, items.iter().map(|x| x * 2).collect::<Vec<_>>());
        let err = parallel_map(2, &items, |x| if *x == 7 { Err(Error::Domain("seven".into())) } else { Ok(*x) });
        assert!(err.is_err());
    }
}
