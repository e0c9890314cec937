//! α < 0: the H¹ norm stays bounded and the smallest K singular value
//! stays away from zero.

use szego_lab::integrator::{integrate, AuditLevel, SimulationConfig};
use szego_lab::{sobolev_norm, FourierState};

fn main() -> szego_lab::Result<()> {
    let t_max: f64 = std::env::args().nth(1).map_or(40.0, |s| s.parse().expect("T"));
    let cfg = SimulationConfig {
        alpha: -1.0,
        truncation: 128,
        grid_size: 512,
        t_max,
        sample_interval: 0.25,
        audit: AuditLevel::Full,
        ..SimulationConfig::default()
    };
    let traj = integrate(&cfg, &FourierState::from_real(128, &[1.0, 1.0]))?;
    let half = t_max / 2.0;
    let sup = |keep: &dyn Fn(f64) -> bool| {
        traj.samples.iter().filter(|s| keep(s.t)).map(|s| sobolev_norm(&s.state, 1.0)).fold(0.0, f64::max)
    };
    let (early, late) = (sup(&|t| t <= half), sup(&|t| t >= half));
    println!("sup H¹ on [0, {half}] = {early:.6}, on [{half}, {t_max}] = {late:.6}");
    let kmin = traj
        .samples
        .iter()
        .filter_map(|s| s.spectral.as_ref()?.k_eigenvalues.last().map(|l| l.sqrt()))
        .fold(f64::INFINITY, f64::min);
    let rmax = traj.samples.iter().filter_map(|s| s.pole_radius).fold(0.0, f64::max);
    println!("min K singular value {kmin:.6}, max pole radius {rmax:.4}");
    if let Some(inv) = &traj.samples[0].invariants {
        for l in &inv.per_level {
            println!("ℓ at σ = {:.6}: {:.6}", l.sigma, l.ell);
        }
    }
    Ok(())
}
