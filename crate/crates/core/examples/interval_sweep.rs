//! Scans the single-round polarization over the interval and compares the
//! analytic optimum with the numeric one.

use spinpol::algebra::BathState;
use spinpol::harness::reference_beta;
use spinpol::schedule::{sweep_tau, tau_opt_analytic, tau_opt_numeric, thermal_polarization_exact};
use spinpol::ModelParams;

fn main() -> spinpol::Result<()> {
    let params = ModelParams::new(700, 0.1, 0.1, reference_beta())?;
    let p_th = thermal_polarization_exact(params.bath_size, params.beta_omega1);
    let analytic = tau_opt_analytic(params.coupling, params.bath_size, p_th)?;
    let numeric = tau_opt_numeric(&BathState::thermal(&params), &params)?;

    let taus: Vec<f64> = (1..=400).map(|k| 5.0 * analytic * k as f64 / 400.0).collect();
    let sweep = sweep_tau(&params, &taus)?;
    let (best_tau, best_pol) = sweep.iter().copied().fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });

    println!("thermal polarization      {p_th:.4}");
    println!("analytic interval         {analytic:.5}");
    println!("numeric interval          {numeric:.5}");
    println!("best grid point           tau = {best_tau:.5}, polarization = {best_pol:.4}");
    println!("relative interval error   {:.2}%", 100.0 * (analytic - numeric).abs() / numeric);
    Ok(())
}
