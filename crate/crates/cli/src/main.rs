use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use swe_cli::{execute, CliResult, Experiment, ExperimentConfig, Overrides};

/// Rotating shallow-water experiments with compatible mixed finite elements.
#[derive(Parser)]
#[command(name = "swe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steady geostrophic jet: error convergence under mesh refinement.
    Balance(Flags),
    /// Energy and enstrophy change against the time step.
    Conservation(Flags),
    /// Two merging Gaussian vortices with PV snapshots.
    Vortex(Flags),
    /// A single run from a named initial condition.
    Run(Flags),
}

#[derive(Args)]
struct Flags {
    /// rt0, bdm1, bdfm1 or bdm2.
    #[arg(long)]
    element: Option<String>,
    /// n=<int> or msh=<path>; repeat for several meshes.
    #[arg(long)]
    mesh: Vec<String>,
    /// Time step; a comma-separated list for the conservation study.
    #[arg(long)]
    dt: Option<String>,
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Enable the anticipated potential vorticity upwinding.
    #[arg(long)]
    apvm: bool,
    /// Upwinding timescale (default dt/2).
    #[arg(long)]
    tau: Option<f64>,
    /// Coriolis parameter.
    #[arg(long)]
    f: Option<f64>,
    /// Gravitational acceleration.
    #[arg(long)]
    g: Option<f64>,
    /// balance, conservation, vortex or rest (run only).
    #[arg(long)]
    initial: Option<String>,
    #[arg(long = "sample-every")]
    sample_every: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// INI configuration file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main_inner(cli: Cli) -> CliResult<()> {
    let (exp, flags) = match cli.command {
        Command::Balance(f) => (Experiment::Balance, f),
        Command::Conservation(f) => (Experiment::Conservation, f),
        Command::Vortex(f) => (Experiment::Vortex, f),
        Command::Run(f) => (Experiment::Custom, f),
    };
    let overrides = Overrides {
        element: flags.element,
        meshes: flags.mesh,
        initial: flags.initial,
        dt: flags.dt,
        t_end: flags.t_end,
        apvm: flags.apvm,
        tau: flags.tau,
        f: flags.f,
        g: flags.g,
        sample_every: flags.sample_every,
        out: flags.out,
    };
    let cfg = ExperimentConfig::resolve(exp, flags.config.as_deref(), &overrides)?;
    let report = execute(&cfg)?;
    for line in &report.lines {
        println!("{line}");
    }
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.one_line());
            ExitCode::FAILURE
        }
    }
}
