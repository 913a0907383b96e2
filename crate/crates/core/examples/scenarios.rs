//! The four hardware presets under the numeric strategy.

use spinpol::harness::scenario::preset;
use spinpol::harness::{Scenario, ScenarioName};
use spinpol::{run_protocol, Strategy};

fn main() -> spinpol::Result<()> {
    for name in ScenarioName::PRESETS {
        let scenario = Scenario::preset(name)?;
        let hw = preset(name).expect("preset exists");
        let p = scenario.params;
        let trace = run_protocol(&p, &Strategy::numeric(), 12)?;
        println!(
            "{name}: M={} omega0={} MHz Delta={} g={} beta*omega1={:.3e}",
            p.bath_size, hw.omega0_mhz, p.detuning, p.coupling, p.beta_omega1
        );
        let shown: Vec<String> = trace.rounds.iter().map(|r| format!("{:.3}", r.polarization)).collect();
        println!("    polarization {:.3} -> {}", trace.initial_polarization, shown.join(" "));
    }
    Ok(())
}
