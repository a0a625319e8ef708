//! Convergence of truncated solutions across dyadic cutoffs on coupled data.

use radial_nlw::experiments::{convergence_study, data_only_exponent, ConvergenceStudy};
use radial_nlw::Result;

fn main() -> Result<()> {
    let study = ConvergenceStudy {
        alpha: 3.0,
        s: 0.4,
        n_list: vec![8, 16, 32, 64],
        horizon: 1.0,
        dt: 1e-3,
        count: 40,
        master_seed: 42,
        stride: 10,
    };
    let report = convergence_study(&study)?;
    println!("N0   N1   median sup_t ‖u_N1 - u_N0‖_H^0.4   data part   bootstrap step");
    for p in &report.pairs {
        println!(
            "{:<4} {:<4} {:.4}                             {:.4}      {:.3e}",
            p.n0, p.n1, p.difference.q50, p.data_difference.q50, p.schedule.step
        );
    }
    println!("decay exponent {:.4} (R² {:.3})", report.decay_exponent, report.fit_r_squared);
    let data = data_only_exponent(0.4, &[16, 32, 64, 128, 256, 512], 1000, 42)?;
    println!("data-only exponent {:.4}, expected s - 1/2 = -0.1", data.slope);
    Ok(())
}
