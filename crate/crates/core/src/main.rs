use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use chainqst::report::compare_report;
use chainqst::scenario::{load_scenario, preset, SolverKind};
use chainqst::sweep::{run_sweep, write_csv, write_csv_to};
use chainqst::Result;

#[derive(Parser)]
#[command(
    version,
    about = "State transfer through a hopping chain coupled to a fermionic bath"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario over its time/temperature grid and write CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// exact, weisskopf, closed_form or compare
        #[arg(long)]
        solver: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Defaults to the scenario's `output`, or stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write one of the shipped scenario files.
    Preset {
        #[arg(long)]
        name: String,
        #[arg(long)]
        output: PathBuf,
    },
    /// Compare the exact and perturbative solvers on a scenario.
    Report {
        #[arg(long)]
        config: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            solver,
            seed,
            output,
        } => {
            let mut s = load_scenario(&config)?;
            if let Some(name) = solver {
                s.solver = name.parse::<SolverKind>()?;
            }
            if let Some(seed) = seed {
                s = s.with_seed(seed);
            }
            let rows = run_sweep(&s)?;
            match output.or(s.output.clone()) {
                Some(path) => {
                    write_csv(&rows, &path)?;
                    log::info!("wrote {} rows to {}", rows.len(), path.display());
                }
                None => write_csv_to(&rows, std::io::stdout().lock())?,
            }
        }
        Command::Preset { name, output } => {
            std::fs::write(&output, preset(&name)?.to_toml()?)?;
        }
        Command::Report { config } => {
            println!("{}", compare_report(&load_scenario(&config)?)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
