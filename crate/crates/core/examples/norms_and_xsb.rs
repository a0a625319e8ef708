//! Sobolev, mixed space-time and restriction-space norms of trajectories.

use radial_nlw::flow::{evolve_strided, linear_trajectory};
use radial_nlw::norms::{embedding_constant, space_time_spectrum, sup_sobolev, NormSpec, TimeWindow};
use radial_nlw::random_data::sample_gibbs;
use radial_nlw::rng::member_rng;
use radial_nlw::{ModelParams, Result};

fn main() -> Result<()> {
    let params = ModelParams::new(3.0, 32)?;
    let phi = sample_gibbs(&params, &mut member_rng(42, 0))?.field;
    let h = 1.0 / 256.0;
    let nonlinear = evolve_strided(&phi, &params, 0.5, h / 4.0, 4)?;
    let linear = linear_trajectory(&phi, &params, (0..=128).map(|k| k as f64 * h).collect())?;

    for (name, traj) in [("linear", &linear), ("nonlinear", &nonlinear)] {
        let l4l8 = NormSpec::mixed(4.0, 8.0).mixed_norm(traj)?;
        let early = NormSpec::mixed(4.0, 8.0).with_window(TimeWindow::new(0.0, 0.25)?).mixed_norm(traj)?;
        let xsb = NormSpec::xsb(0.4, 0.55).xsb_norm(traj)?;
        println!(
            "{name:<9}  L⁴L⁸ {l4l8:.4} (first half {early:.4})  X^(0.4,0.55) {xsb:.4}  C·X ≥ sup H^0.4: {:.4} ≥ {:.4}",
            embedding_constant(0.55)? * xsb,
            sup_sobolev(traj, 0.4)
        );
    }
    let spectrum = space_time_spectrum(&linear)?;
    let off = spectrum.weighted_energy(0.0, 0.0, 2) / spectrum.weighted_energy(0.0, 0.0, 0);
    println!("linear flow energy off the diagonal |m - n| ≥ 2: {off:.4}");
    Ok(())
}
