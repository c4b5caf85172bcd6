use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use twoway_tc::experiments::{run, summary_path, Command, ExperimentConfig, ExperimentError};
use twoway_tc::montecarlo::Parallelism;

const THREADS_ENV: &str = "TWOWAY_TC_THREADS";

/// Two-way transmission capacity experiments.
#[derive(Parser)]
#[command(name = "twoway-tc", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analytic capacity bounds over an outage grid.
    Bounds(RunArgs),
    /// Monte Carlo joint success and capacity.
    Simulate(RunArgs),
    /// Capacity across bandwidth splits and the optimal split.
    Allocate(RunArgs),
    /// Limited-feedback beamforming bounds.
    Feedback(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output CSV; overrides the `output` field of the config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
}

fn parallelism() -> Result<Parallelism, ExperimentError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Parallelism::threads(n)),
            _ => Err(ExperimentError::Config {
                field: THREADS_ENV.to_string(),
                message: format!("must be a positive integer, got {v:?}"),
            }),
        },
        Err(_) => Ok(Parallelism::default()),
    }
}

fn execute(command: Command, args: RunArgs) -> Result<(), ExperimentError> {
    let config = ExperimentConfig::load(&args.config)?.with_overrides(args.seed, args.trials)?;
    let out = args
        .out
        .or_else(|| config.output.clone())
        .ok_or_else(|| ExperimentError::Config {
            field: "output".to_string(),
            message: "give --out or an output path in the config".to_string(),
        })?;
    let result = run(command, &config, parallelism()?)?;
    result.table.write_file(&out)?;
    if let Some(summary) = result.summary {
        print!("{}", summary.to_csv_string());
        summary.write_file(&summary_path(&out))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Bounds(a) => (Command::Bounds, a),
        Cmd::Simulate(a) => (Command::Simulate, a),
        Cmd::Allocate(a) => (Command::Allocate, a),
        Cmd::Feedback(a) => (Command::Feedback, a),
    };
    match execute(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
