//! Dense simulation of the XY, XX and XYZ couplings on a small Dicke bath,
//! with the XY result checked against the closed form.

use spinpol::exact::{run_exact_protocol, Basis, HamiltonianSpec};
use spinpol::{run_protocol, Interaction, ModelParams, Strategy};

fn main() -> spinpol::Result<()> {
    let base = ModelParams::new(40, 0.1, 0.03, 0.2)?;
    let rounds = 10;
    for interaction in [Interaction::XY, Interaction::XX, Interaction::XYZ] {
        let spec = HamiltonianSpec::new(base.with_interaction(interaction), Basis::DickeSubspace);
        let trace = run_exact_protocol(&spec, &Strategy::numeric(), rounds)?;
        let pols: Vec<String> = trace.rounds.iter().map(|r| format!("{:.3}", r.polarization)).collect();
        println!("{interaction:<4} [{}] {}", trace.engine, pols.join(" "));
    }

    let schedule = Strategy::Schedule(vec![0.5, 0.8, 1.1, 0.7]);
    let exact = run_exact_protocol(&HamiltonianSpec::new(base, Basis::DickeSubspace), &schedule, 4)?;
    let closed = run_protocol(&base, &schedule, 4)?;
    let gap = exact
        .rounds
        .iter()
        .zip(&closed.rounds)
        .map(|(a, b)| (a.polarization - b.polarization).abs())
        .fold(0.0, f64::max);
    println!("XY dense vs closed form, largest polarization gap: {gap:.2e}");
    Ok(())
}
