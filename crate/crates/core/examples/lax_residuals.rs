//! Finite-difference check of the Lax pair for K_u and of the perturbed
//! evolution of H_u, with the second-order decay under halving δt.

use szego_lab::integrator::{integrate, AuditLevel, SimulationConfig};
use szego_lab::lax::{hu_evolution_residual, lax_residual_k, projection_evolution_residual};
use szego_lab::FourierState;

fn main() -> szego_lab::Result<()> {
    let cfg = SimulationConfig {
        alpha: 1.0,
        truncation: 128,
        grid_size: 512,
        t_max: 1.0,
        sample_interval: 0.25,
        audit: AuditLevel::StateOnly,
        ..SimulationConfig::default()
    };
    let traj = integrate(&cfg, &FourierState::from_real(128, &[1.0, 1.0]))?;
    println!("{:>10} {:>12} {:>12} {:>12}", "δt", "K", "H", "H no source");
    for dt in [4e-4, 2e-4, 1e-4, 5e-5] {
        println!(
            "{dt:>10.1e} {:>12.3e} {:>12.3e} {:>12.3e}",
            lax_residual_k(&traj, 1.0, dt, 128)?,
            hu_evolution_residual(&traj, 1.0, dt, 128, true)?,
            hu_evolution_residual(&traj, 1.0, dt, 128, false)?
        );
    }
    println!("projection onto σ = 1: {:.3e}", projection_evolution_residual(&traj, 1.0, 0.5, 1e-4)?);
    Ok(())
}
