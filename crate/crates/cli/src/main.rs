use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cauchy_ls::{cmd_experiment, cmd_solve, cmd_svd, output_root};

/// Level-set reconstruction of unknown boundary fluxes in elliptic Cauchy
/// problems.
#[derive(Parser)]
#[command(name = "cauchy-ls", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the reconstruction described by a config file.
    Solve { config: PathBuf },
    /// Run a built-in experiment: exp1, exp2 or exp3.
    Experiment { name: String },
    /// Singular values of the discrete forward operator.
    Svd { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let root = output_root();
    let result = match &cli.command {
        Command::Solve { config } => cmd_solve(config, &root).map(|dir| {
            println!("results written to {}", dir.display());
        }),
        Command::Experiment { name } => cmd_experiment(name, &root).map(|report| {
            for run in &report.runs {
                let last = run.outcome.record.last();
                println!(
                    "[{}] {}: stop = {} at iter {}, residual = {:.4e}, error = {:.4e}, dir = {}",
                    report.experiment.name(),
                    run.label,
                    run.outcome.record.stop_reason.as_str(),
                    last.iter,
                    last.residual,
                    last.error.unwrap_or(f64::NAN),
                    run.dir.display()
                );
            }
            if let Some(text) = &report.comparison {
                print!("{text}");
            }
        }),
        Command::Svd { config } => cmd_svd(config, &root).map(|slope| {
            println!("slope of ln sigma_k: {slope:.6}");
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cauchy-ls: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
