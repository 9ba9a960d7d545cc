use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use corrnoise::cli::{run, Command, Overrides};
use corrnoise::SearchMode;

#[derive(Parser)]
#[command(
    name = "corrnoise",
    version,
    about = "Minimum output entropy of correlated-noise channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Minimum output entropy over a mu grid; writes sweep.csv / sweep.svg
    Sweep(CommonArgs),
    /// Common-eigenvector test predicting a transition
    Check(CommonArgs),
    /// Closed-form fidelity and linear-entropy curves; writes estimates.csv / estimates.svg
    Estimate(CommonArgs),
    /// Runs the invariant suites
    Validate(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment file (key = value lines)
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    mu_points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// full | ansatz | real_ansatz
    #[arg(long)]
    mode: Option<SearchMode>,
    #[arg(long)]
    no_svg: bool,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Sweep(a) => (Command::Sweep, a),
        Cmd::Check(a) => (Command::Check, a),
        Cmd::Estimate(a) => (Command::Estimate, a),
        Cmd::Validate(a) => (Command::Validate, a),
    };
    let overrides = Overrides {
        mu_points: args.mu_points,
        seed: args.seed,
        mode: args.mode,
        no_svg: args.no_svg,
        out: args.out,
    };
    let code = run(
        command,
        &args.config,
        &overrides,
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
