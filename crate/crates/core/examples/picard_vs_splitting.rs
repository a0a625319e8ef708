//! Local Picard iteration of the Duhamel formula against the splitting flow.

use radial_nlw::flow::{evolve, picard_solve, Method};
use radial_nlw::norms::sobolev_norm;
use radial_nlw::random_data::sample_gibbs;
use radial_nlw::rng::member_rng;
use radial_nlw::{Error, ModelParams, Result};

fn main() -> Result<()> {
    let params = ModelParams::new(3.0, 16)?;
    for index in 0..5 {
        let phi = sample_gibbs(&params, &mut member_rng(42, index))?.field;
        let picard = picard_solve(&phi, &params, 0.1, 1e-10)?;
        let split = evolve(&phi, &params, 0.1, 1e-4)?;
        let gap = picard
            .iter()
            .filter_map(|(t, u)| split.index_of(t).map(|k| sobolev_norm(&u.difference(&split.states()[k]), 0.4)))
            .fold(0.0, f64::max);
        let Method::Picard { iterations } = picard.method() else { unreachable!() };
        println!("datum {index}: {iterations} iterations, sup_t H^0.4 gap {gap:.2e}");
    }
    let big = sample_gibbs(&params, &mut member_rng(42, 0))?.field.scaled(300.0);
    if let Err(Error::NoConvergence { iterations, reason, .. }) = picard_solve(&big, &params, 0.5, 1e-10) {
        println!("large data: stopped after {iterations} iterations ({reason})");
    }
    Ok(())
}
