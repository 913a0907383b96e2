//! Per-level reduction factors `|alpha_m|^2` after one and after ten
//! measurement rounds at a fixed interval.
//!
//! Run with `cargo run --release --example reduction_factors`.

use spinpol::algebra::coefficient_profile;
use spinpol::harness::reference_beta;
use spinpol::ModelParams;

fn main() -> spinpol::Result<()> {
    let params = ModelParams::new(700, 0.1, 0.1, reference_beta())?;
    let tau = 0.03;
    let once = coefficient_profile(&params, tau, 1)?;
    let ten = coefficient_profile(&params, tau, 10)?;

    println!("M = {}, tau = {tau}", params.bath_size);
    println!("{:>5} {:>14} {:>14}", "m", "|a_m|^2", "|a_m|^2 ^10");
    for m in (0..=params.bath_size).step_by(50) {
        println!("{m:>5} {:>14.6e} {:>14.6e}", once.values[m], ten.values[m]);
    }
    let protected = ten.values.iter().filter(|v| **v > 0.99).count();
    println!("levels keeping more than 99% after ten rounds: {protected}");
    Ok(())
}
