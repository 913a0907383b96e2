//! Equal spacing, unequal spacing at several update rates and the numeric
//! look-ahead strategy on the same bath.

use spinpol::harness::reference_beta;
use spinpol::{run_protocol, IntervalRule, ModelParams, Strategy};

fn main() -> spinpol::Result<()> {
    let params = ModelParams::new(700, 0.1, 0.03, reference_beta())?;
    let strategies = [
        Strategy::EqualSpacing,
        Strategy::unequal(10),
        Strategy::unequal(2),
        Strategy::unequal(1),
        Strategy::UnequalSpacing { update_every: 1, rule: IntervalRule::Polarization },
        Strategy::numeric(),
    ];
    println!("{:<40} {:>8} {:>8} {:>10} {:>12}", "strategy", "P(5)", "P(20)", "S(20)", "success");
    for strategy in &strategies {
        let trace = run_protocol(&params, strategy, 20)?;
        println!(
            "{:<40} {:>8.4} {:>8.4} {:>10.3e} {:>12.3e}",
            strategy.to_string(),
            trace.polarization_or_saturated(5).unwrap_or(f64::NAN),
            trace.final_polarization(),
            trace.rounds.last().map_or(f64::NAN, |r| r.entropy),
            trace.final_success_probability(),
        );
        if let Some(stop) = trace.stop {
            println!("    stopped after {} rounds: {stop}", trace.len());
        }
    }
    Ok(())
}
