//! Runs a named scenario into a directory and re-checks it from the
//! written files, as the `szego-lab` binary does.
//!
//!     cargo run --release --example run_scenario -- crossing_L1 /tmp/run

use std::path::PathBuf;

use szego_lab::experiments::{check_run, run_scenario, Overrides, Scenario};

fn main() -> szego_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let scenario: Scenario = args.next().as_deref().unwrap_or("crossing_L1").parse()?;
    let dir = args.next().map_or_else(|| std::env::temp_dir().join(scenario.name()), PathBuf::from);
    let summary = run_scenario(scenario, Overrides::default(), &dir)?;
    for c in &summary.checks {
        println!("{}", c.line());
    }
    let again = check_run(&dir)?;
    println!("written to {}; re-check: {} passed, {} failed", dir.display(), again.passed, again.failed);
    Ok(())
}
