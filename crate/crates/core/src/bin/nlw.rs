use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use radial_nlw::run::{run, RunConfig, RunOptions, RunStatus};
use radial_nlw::Error;

/// Monte Carlo runs for the radial defocusing wave equation.
#[derive(Parser)]
#[command(name = "nlw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw initial data and record observables.
    Sample(RunArgs),
    /// Evolve each member and record energy conservation.
    Evolve(RunArgs),
    /// Two-sample test of Gibbs invariance under the flow.
    Invariance(RunArgs),
    /// Galerkin convergence across dyadic cutoffs.
    Converge(RunArgs),
    /// Uniform-in-N size of the nonlinear Duhamel part.
    Smoothing(RunArgs),
    /// Survival functions and sub-Gaussian tail fits.
    Tails(RunArgs),
    /// Restriction-norm to mixed-norm ratios of Duhamel integrals.
    Strichartz(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Continue a partial run in the output directory.
    #[arg(long)]
    resume: bool,
    /// Output directory (default: the config's `out`, else `nlw-out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "NLW_THREADS")]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Sample(a) => ("sample", a),
        Command::Evolve(a) => ("evolve", a),
        Command::Invariance(a) => ("invariance", a),
        Command::Converge(a) => ("converge", a),
        Command::Smoothing(a) => ("smoothing", a),
        Command::Tails(a) => ("tails", a),
        Command::Strichartz(a) => ("strichartz", a),
    };
    match execute(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nlw: {e}");
            match e {
                Error::Usage(_) | Error::Parameter(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn execute(kind: &str, args: RunArgs) -> radial_nlw::Result<()> {
    let config = RunConfig::load(&args.config)?;
    if config.experiment.kind() != kind {
        return Err(Error::Usage(format!(
            "config describes a `{}` experiment, not `{kind}`",
            config.experiment.kind()
        )));
    }
    let out = args
        .out
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("nlw-out"));
    let options = RunOptions {
        out,
        resume: args.resume || config.resume,
        threads: args.threads,
        max_members: None,
    };
    let outcome = run(&config, &options)?;
    match outcome.status {
        RunStatus::Complete => println!(
            "{kind}: {} members written to {}",
            outcome.completed_members,
            outcome.dir.display()
        ),
        RunStatus::Partial => println!(
            "{kind}: partial run with {} members in {}",
            outcome.completed_members,
            outcome.dir.display()
        ),
    }
    Ok(())
}
