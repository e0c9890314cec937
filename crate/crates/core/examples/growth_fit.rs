//! Exponential growth of Sobolev norms from u₀ = 1 + z at α = 1, fitted on
//! the resolved window. Larger N resolves longer.
//!
//!     cargo run --release --example growth_fit -- 4096

use szego_lab::experiments::analysis::{fit_growth, fit_pole_decay, resolved_window};
use szego_lab::experiments::builtin_growth_datum;
use szego_lab::integrator::{integrate, AuditLevel, SimulationConfig};

fn main() -> szego_lab::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(4096, |s| s.parse().expect("N"));
    let cfg = SimulationConfig {
        alpha: 1.0,
        truncation: n,
        grid_size: 4 * n,
        t_max: 10.0,
        sample_interval: 0.05,
        audit: AuditLevel::NormsOnly,
        hierarchy_order: 2,
        ..SimulationConfig::default()
    };
    let traj = integrate(&cfg, &builtin_growth_datum(1.0, 1.0, n)?)?;
    let window = resolved_window(&traj, 2.0);
    println!("N = {n}: resolved until t = {:.3}, fit window {window:?}", window.1);
    for fit in fit_growth(&traj, &[0.5, 1.0, 1.5, 2.0], &[window])? {
        println!("s = {:<4} slope {:>8.5}  R² {:.6}", fit.s, fit.slope, fit.r_squared);
    }
    let (slope, _, r2) = fit_pole_decay(&traj, window)?;
    println!("log(1 − pole radius): slope {slope:.4}, R² {r2:.6}");
    Ok(())
}
