//! Survival functions and sub-Gaussian fits of random space-time norms.

use radial_nlw::experiments::{tail_estimate, EnsembleConfig, InitialData, TailQuantity};
use radial_nlw::{ModelParams, Result};

fn main() -> Result<()> {
    let params = ModelParams::new(3.0, 32)?;
    let grid: Vec<f64> = (1..=8).map(|k| k as f64 / 10.0).collect();
    let free = EnsembleConfig::new(params, 1.0, 1000, 42)
        .with_data(InitialData::Free)
        .with_dt(1.0 / 128.0)
        .with_lambda_grid(grid.clone());
    let cases = [
        ("‖S(t)φ‖_{L⁴L⁸}", free.clone(), TailQuantity::LinearMixedNorm { p: 4.0, q: 8.0 }),
        ("‖φ‖_{L⁴}", free, TailQuantity::DataSobolevLp { s: 0.0, p: 4.0 }),
        (
            "‖u‖_{L⁴L⁸}",
            EnsembleConfig::new(params, 1.0, 300, 42).with_lambda_grid(grid.clone()),
            TailQuantity::NonlinearMixedNorm { p: 4.0, q: 8.0 },
        ),
    ];
    for (name, cfg, quantity) in cases {
        let report = tail_estimate(&cfg, &quantity)?;
        let s = &report.series[0];
        let curve: Vec<String> = s.survival.iter().map(|p| format!("{:.3}", p.probability)).collect();
        println!("{name:<16} mean {:.4}  R² {:.4}  rate {:.2}  P(X > λ): {}", s.mean, s.fit.r_squared, s.fit.rate, curve.join(" "));
    }
    println!("λ grid: {grid:?}");
    Ok(())
}
