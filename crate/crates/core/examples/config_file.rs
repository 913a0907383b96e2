//! Building a run from a flat `key = value` configuration.

use spinpol::harness::RunConfig;
use spinpol::run_protocol;

const CONFIG: &str = "
# bath
M = 300
delta_ratio = 0.1
g_ratio = 0.03
temperature_K = 1
omega0_MHz = 120

# protocol
strategy = unequal
L = 2
N = 10
";

fn main() -> spinpol::Result<()> {
    let config: RunConfig = CONFIG.parse()?;
    for (key, value) in config.describe()? {
        println!("{key:>14} = {value}");
    }
    let trace = run_protocol(&config.resolve_params()?, &config.strategy()?, config.rounds)?;
    println!("strategy {}: polarization {:.4} -> {:.4}", trace.strategy, trace.initial_polarization, trace.final_polarization());

    let conflicting = format!("{CONFIG}beta_omega1 = 0.01\n").parse::<RunConfig>()?;
    match conflicting.resolve_beta() {
        Err(e) => println!("rejected as expected: {e}"),
        Ok(b) => println!("unexpectedly accepted beta {b}"),
    }
    Ok(())
}
