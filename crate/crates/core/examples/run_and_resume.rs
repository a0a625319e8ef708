//! Checkpointed ensemble runs: interrupt, resume and compare checksums.

use radial_nlw::experiments::EnsembleConfig;
use radial_nlw::run::{run, Experiment, RunConfig, RunOptions};
use radial_nlw::{ModelParams, Result};

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join(format!("nlw-example-{}", std::process::id()));
    let config = RunConfig::new(Experiment::Evolve(EnsembleConfig::new(ModelParams::new(3.0, 16)?, 0.5, 40, 42)));
    println!("{}", config.to_json()?);

    let whole = run(&config, &RunOptions { out: dir.join("whole"), ..RunOptions::default() })?;
    let pieces = RunOptions { out: dir.join("pieces"), max_members: Some(15), ..RunOptions::default() };
    let partial = run(&config, &pieces)?;
    println!("interrupted: {:?} with {} members", partial.status, partial.completed_members);
    let resumed = run(&config, &RunOptions { resume: true, max_members: None, ..pieces })?;
    println!("resumed: {:?}", resumed.status);
    println!("checksums equal: {}", whole.checksums == resumed.checksums);
    println!("{:#?}", resumed.checksums);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
