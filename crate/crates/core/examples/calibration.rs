//! Ways of fixing the thermal parameter: calibration against a target
//! polarization, a physical temperature, or the shared reference.

use spinpol::harness::{calibrate_beta, reference_beta, RunConfig};
use spinpol::params::{thermal_parameter, FrequencyConvention};
use spinpol::schedule::thermal_polarization_exact;

fn main() -> spinpol::Result<()> {
    let b = calibrate_beta(700, 0.257)?;
    println!("calibrated beta*omega1 for P_th(700) = 0.257: {b:.10e}");
    println!("check: P_th = {:.12}", thermal_polarization_exact(700, b));
    println!("shared reference:                      {:.10e}", reference_beta());

    for kelvin in [0.001, 0.01, 0.1] {
        let ordinary = thermal_parameter(108.0, FrequencyConvention::Ordinary, kelvin)?;
        let angular = thermal_parameter(108.0, FrequencyConvention::Angular, kelvin)?;
        println!(
            "T = {kelvin:>5} K, omega1 = 108 MHz: beta*omega1 = {ordinary:.4e} (Hz) / {angular:.4e} (rad/s), P_th(700) = {:.3}",
            thermal_polarization_exact(700, ordinary)
        );
    }

    let config: RunConfig = "scenario = NV2\ncalibrate_polarization = 0.05\n".parse()?;
    println!("NV2 calibrated to P_th = 0.05: beta*omega1 = {:.4e}", config.resolve_beta()?);
    Ok(())
}
