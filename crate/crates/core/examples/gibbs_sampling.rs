//! Free and Gibbs initial data: acceptance rates and energy statistics.

use radial_nlw::random_data::{hamiltonian, sample_free, sample_gibbs};
use radial_nlw::rng::member_rng;
use radial_nlw::stats::{mean, quantile};
use radial_nlw::{ModelParams, Result};

fn main() -> Result<()> {
    println!("alpha  N    acceptance  median V   mean ‖φ‖²");
    for alpha in [1.0, 2.0, 3.0, 3.9] {
        for cutoff in [8, 32] {
            let params = ModelParams::new(alpha, cutoff)?;
            let (mut attempts, mut potentials, mut masses) = (0, Vec::new(), Vec::new());
            for i in 0..2000 {
                let s = sample_gibbs(&params, &mut member_rng(7, i))?;
                attempts += s.attempts;
                potentials.push(s.potential);
                masses.push(s.field.l2_norm_squared());
            }
            println!(
                "{alpha:>5}  {cutoff:<3}  {:.4}      {:.5}    {:.5}",
                2000.0 / attempts as f64,
                quantile(&potentials, 0.5)?,
                mean(&masses)
            );
        }
    }
    let phi = sample_free(32, &mut member_rng(7, 0));
    println!("\nfree draw: H = {:.4} (α = 2), E‖φ‖² → 1/6 = {:.4}", hamiltonian(&phi, 2.0)?, 1.0 / 6.0);
    match sample_gibbs(&ModelParams::new(4.0, 8)?, &mut member_rng(7, 0)) {
        Err(e) => println!("α = 4: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
