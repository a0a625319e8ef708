//! Size of the nonlinear Duhamel part u_N - S(t)P_Nφ across cutoffs.

use radial_nlw::experiments::{smoothing_check, InitialData, SmoothingStudy};
use radial_nlw::Result;

fn main() -> Result<()> {
    for sigma in [0.4, 0.8, 1.2] {
        let study = SmoothingStudy {
            alpha: 3.0,
            sigma,
            n_list: vec![16, 32, 64],
            horizon: 1.0,
            dt: 1e-3,
            count: 30,
            master_seed: 42,
            stride: 10,
            data: InitialData::Free,
        };
        let report = smoothing_check(&study)?;
        let medians: Vec<String> = report.rows.iter().map(|r| format!("{:.5}", r.quantiles.q50)).collect();
        println!(
            "σ = {sigma}: medians [{}], max/min {:.3}, below (5-α)/2: {}",
            medians.join(", "),
            report.median_ratio,
            report.bounded_regime
        );
    }
    Ok(())
}
