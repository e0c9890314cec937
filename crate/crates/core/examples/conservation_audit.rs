//! Drift of every conserved quantity along a bounded trajectory, and the
//! motion of the H-spectrum that the Lax pair does not freeze.

use szego_lab::integrator::{integrate, AuditLevel, SimulationConfig};
use szego_lab::FourierState;

fn main() -> szego_lab::Result<()> {
    let cfg = SimulationConfig {
        alpha: -1.0,
        truncation: 128,
        grid_size: 512,
        t_max: 20.0,
        sample_interval: 0.1,
        audit: AuditLevel::Full,
        ..SimulationConfig::default()
    };
    let traj = integrate(&cfg, &FourierState::from_real(128, &[1.0, 1.0]))?;
    let first = traj.samples[0].invariants.as_ref().expect("full audit").named();
    println!("{:>8} {:>22} {:>12}", "name", "value at t=0", "max drift");
    for (i, (name, x0)) in first.iter().enumerate() {
        let drift = traj
            .samples
            .iter()
            .filter_map(|s| s.invariants.as_ref())
            .map(|inv| (inv.named()[i].1 - x0).abs() / x0.abs().max(1.0))
            .fold(0.0, f64::max);
        println!("{name:>8} {x0:>22.15} {drift:>12.3e}");
    }

    let rho1: Vec<f64> = traj
        .samples
        .iter()
        .filter_map(|s| s.spectral.as_ref().and_then(|sp| sp.h_eigenvalues.first()).map(|l| l.sqrt()))
        .collect();
    let (lo, hi) = rho1.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    println!("ρ1 ranges over [{lo:.6}, {hi:.6}]");
    println!("σ at t=0: {:?}", traj.samples[0].spectral.as_ref().map(|s| s.sigmas()));
    Ok(())
}
