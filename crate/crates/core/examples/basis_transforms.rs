//! Radial sine basis: point values, Lᵖ norms, transforms and the nonlinearity.

use num_complex::Complex64;
use radial_nlw::basis::{self, default_panels, eigenfunction_value, lp_norm, RadialGrid};
use radial_nlw::{Result, SpectralField};

fn main() -> Result<()> {
    println!("e_1(1/2) = {:.6}, e_5(0) = {:.6}", eigenfunction_value(1, 0.5)?, eigenfunction_value(5, 0.0)?);

    println!("\n   n   ‖e_n‖₂    ‖e_n‖₄   ‖e_n‖₄ / n^¼");
    for n in [1, 4, 16, 64, 256] {
        let l4 = lp_norm(n, 4.0, 4096)?;
        println!("{n:>4}  {:.6}  {l4:.5}  {:.5}", lp_norm(n, 2.0, 4096)?, l4 / (n as f64).powf(0.25));
    }

    let field = SpectralField::from_coeffs((1..=32).map(|n| Complex64::new(1.0 / n as f64, 0.5 / n as f64)).collect())?;
    let mut grid = RadialGrid::new(256)?;
    let values = grid.synthesize(&field)?;
    let back = grid.analyze(&values, 32)?;
    let err = field.coeffs().iter().zip(back.coeffs()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("\nround trip error {err:.1e}; Σ|c|² = {:.12}, grid L² = {:.12}", field.l2_norm_squared(), values.l2_norm_squared());

    let panels = default_panels(3.0, 32);
    let f = basis::apply_nonlinearity(&field, 3.0, 32, panels)?;
    println!("P_32(|Re u|³ Re u) on {panels} panels: c_1 = {:.6}, c_32 = {:.3e}", f.coeff(1).re, f.coeff(32).re);
    Ok(())
}
