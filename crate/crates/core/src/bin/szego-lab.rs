use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use szego_lab::experiments::{check_run, run_scenario, Overrides, Scenario, Summary};

/// Exit status for usage and runtime errors.
const EXIT_ERROR: u8 = 125;

#[derive(Parser)]
#[command(name = "szego-lab", version, about = "Run and re-check numerical experiments on the α-Szegő equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its tables and summary.
    Run {
        scenario: Scenario,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long = "rel-tol")]
        rel_tol: Option<f64>,
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// JSON file of settings; flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (default `runs/<scenario>`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-evaluate the checks of a finished run from its files.
    Check { run_dir: PathBuf },
}

fn report(summary: &Summary) -> ExitCode {
    for c in &summary.checks {
        println!("{}", c.line());
    }
    println!("{}: {} passed, {} failed", summary.scenario, summary.passed, summary.failed);
    ExitCode::from(summary.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { scenario, alpha, n, grid, tmax, rel_tol, data, seed, config, out } => {
            let flags = Overrides { alpha, n, grid, t_max: tmax, rel_tol, data, seed, ..Default::default() };
            let out = out.unwrap_or_else(|| PathBuf::from("runs").join(scenario.name()));
            config
                .map(|p| Overrides::load(&p))
                .transpose()
                .and_then(|cfg| run_scenario(scenario, flags.over(cfg.unwrap_or_default()), &out))
        }
        Command::Check { run_dir } => check_run(&run_dir),
    };
    match result {
        Ok(summary) => report(&summary),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
