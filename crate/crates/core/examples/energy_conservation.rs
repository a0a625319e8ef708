//! Strang splitting of the truncated flow and its Hamiltonian error.

use radial_nlw::experiments::hamiltonian_deviation;
use radial_nlw::flow::evolve;
use radial_nlw::random_data::sample_gibbs;
use radial_nlw::rng::member_rng;
use radial_nlw::{ModelParams, Result};

fn main() -> Result<()> {
    let params = ModelParams::new(2.0, 32)?;
    let phi = sample_gibbs(&params, &mut member_rng(42, 0))?.field;
    println!("dt        max |ΔH|/H    ratio");
    let mut last: Option<f64> = None;
    for dt in [4e-3, 2e-3, 1e-3, 5e-4] {
        let traj = evolve(&phi, &params, 2.0, dt)?;
        let worst = hamiltonian_deviation(&traj)?.into_iter().fold(0.0, f64::max);
        let ratio = last.map_or(String::new(), |l| format!("{:.3}", l / worst));
        println!("{dt:<8}  {worst:.3e}     {ratio}");
        last = Some(worst);
    }
    Ok(())
}
