//! A bath of eight spins simulated in the symmetric subspace and in the
//! full product space. The product-space thermal state carries weight in
//! non-symmetric sectors, which limits the reachable polarization.

use spinpol::exact::{run_exact_protocol, Basis, HamiltonianSpec};
use spinpol::harness::reference_beta;
use spinpol::{ModelParams, Strategy};

fn main() -> spinpol::Result<()> {
    let params = ModelParams::new(8, 0.1, 0.03, reference_beta())?;
    for basis in [Basis::DickeSubspace, Basis::FullProductSpace] {
        let spec = HamiltonianSpec::new(params, basis);
        let trace = run_exact_protocol(&spec, &Strategy::numeric(), 15)?;
        println!(
            "{basis:<20} dim {:>4}: first round above 0.99: {:?}, final polarization {:.4}, stop: {}",
            spec.dimension(),
            trace.first_round_above(0.99),
            trace.final_polarization(),
            trace.stop.map_or("none".to_string(), |s| s.to_string()),
        );
    }
    Ok(())
}
