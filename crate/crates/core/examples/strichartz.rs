//! Restriction-norm to mixed-norm ratios of Duhamel integrals of random forcings.

use radial_nlw::experiments::{strichartz_ratio, EnsembleConfig, InitialData};
use radial_nlw::{ModelParams, Result};

fn main() -> Result<()> {
    let params = ModelParams::new(2.0, 32)?;
    let cfg = EnsembleConfig::new(params, 0.5, 60, 42)
        .with_data(InitialData::Free)
        .with_dt(1.0 / 128.0);
    for (s, p) in [(0.3, 1.5), (0.7, 2.0), (0.9, 4.0)] {
        let r = strichartz_ratio(&cfg, s, 0.55, p)?;
        println!("s = {s}, p = {p}: median {:.4}, max {:.4}, max/median {:.3}", r.median, r.max, r.max_over_median);
    }
    if let Err(e) = strichartz_ratio(&cfg, 0.7, 0.55, 1.2) {
        println!("s = 0.7, p = 1.2: {e}");
    }
    Ok(())
}
