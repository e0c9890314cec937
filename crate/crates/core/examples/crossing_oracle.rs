//! A single Blaschke factor at α = 1: the gap of the top two H singular
//! values against the elliptic-function oracle, and the crossing times.
//!
//!     cargo run --example crossing_oracle -- 0.5

use num_complex::Complex64;
use szego_lab::crossing::detect_crossings;
use szego_lab::experiments::data::blaschke_factor_datum;
use szego_lab::integrator::{integrate, AuditLevel, SimulationConfig};
use szego_lab::special::{crossing_oracle_i, CrossingOracleParams};

fn main() -> szego_lab::Result<()> {
    let p: f64 = std::env::args().nth(1).map_or(0.5, |s| s.parse().expect("p"));
    let p = Complex64::new(p, 0.0);
    let cfg = SimulationConfig {
        alpha: 1.0,
        truncation: 128,
        grid_size: 512,
        t_max: 10.0,
        sample_interval: 0.05,
        audit: AuditLevel::Full,
        ..SimulationConfig::default()
    };
    let traj = integrate(&cfg, &blaschke_factor_datum(p, 128)?)?;
    let params = CrossingOracleParams::new(p)?;

    let mut worst = 0.0f64;
    for s in &traj.samples {
        let half = s.spectral.as_ref().and_then(|sp| sp.half_top_gap()).unwrap_or(f64::NAN);
        worst = worst.max((half - crossing_oracle_i(s.t, &params).abs()).abs());
    }
    println!("sup |(ρ1²−ρ2²)/2 − |I(t)|| = {worst:.3e}");

    let report = detect_crossings(&traj, 1.0, 0.05);
    let zeros = params.zeros(traj.end_time);
    println!("{:>12} {:>12} {:>12}", "detected", "oracle", "min gap");
    for (c, z) in report.times.iter().zip(&zeros) {
        println!("{:>12.6} {:>12.6} {:>12.3e}", c.t, z, c.min_gap);
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
