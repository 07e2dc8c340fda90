use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use monge_fronts::pipeline::{self, Command, JobConfig, Overrides};
use monge_fronts::scalar::Backend;

/// Constructs truncated power-series geometric solutions of the
/// Monge-Ampere systems Hess = c and K = c, verifies their residual
/// identities, classifies projection singularities and exports surfaces.
#[derive(Parser)]
#[command(name = "monge-fronts", version, about)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
    /// JSON job configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Truncation order override.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Random seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory override.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Coefficient backend override.
    #[arg(long, global = true, value_enum)]
    backend: Option<BackendArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Rational,
    Float,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Build the geometric-solution jet from initial data.
    Build,
    /// Check the contact, 2-form, factorization and normalization residuals.
    Verify,
    /// Classify projection singularities at given or auto-detected points.
    Classify,
    /// Evaluate a projection on a grid and export OBJ/CSV/JSON.
    Mesh,
    /// Randomized perturbation sweep with a stratum tally.
    Sweep,
    /// Build, verify, classify, mesh and (if configured) sweep.
    Pipeline,
}

impl From<CliCommand> for Command {
    fn from(value: CliCommand) -> Self {
        match value {
            CliCommand::Build => Command::Build,
            CliCommand::Verify => Command::Verify,
            CliCommand::Classify => Command::Classify,
            CliCommand::Mesh => Command::Mesh,
            CliCommand::Sweep => Command::Sweep,
            CliCommand::Pipeline => Command::Pipeline,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(config_path) = &cli.config else {
        eprintln!("error: --config <path> is required");
        return ExitCode::from(2);
    };
    let text = match std::fs::read_to_string(config_path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config_path.display());
            return ExitCode::from(2);
        }
    };
    let mut config = match JobConfig::from_json(&text) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let overrides = Overrides {
        order: cli.order,
        seed: cli.seed,
        out: cli.out.clone(),
        backend: cli.backend.map(|b| match b {
            BackendArg::Rational => Backend::Rational,
            BackendArg::Float => Backend::Float,
        }),
    };
    overrides.apply(&mut config);
    let command: Command = cli.command.into();
    match pipeline::run(command, &config) {
        Ok(summary) => {
            for line in &summary.messages {
                println!("{line}");
            }
            for artifact in &summary.artifacts {
                println!("wrote {}", artifact.display());
            }
            if summary.verify_passed == Some(false) {
                eprintln!("verification failed");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(pipeline::exit_code_for(&e) as u8)
        }
    }
}
