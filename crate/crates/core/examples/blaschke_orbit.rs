//! Zeros of the Blaschke product attached to a K-level stay put while its
//! angle moves.

use num_complex::Complex64;
use szego_lab::experiments::builtin_lifted_datum;
use szego_lab::experiments::data::widest_k_level;
use szego_lab::integrator::{integrate, AuditLevel, SimulationConfig};
use szego_lab::lax::blaschke_orbit_trace;
use szego_lab::BlaschkeProduct;

fn main() -> szego_lab::Result<()> {
    let alpha = 0.1;
    let chi = BlaschkeProduct::factor(Complex64::new(0.3, 0.0))?;
    let u0 = builtin_lifted_datum(alpha, alpha.sqrt(), &chi, 128)?;
    let (sigma, mult) = widest_k_level(&u0)?;
    println!("level σ = {sigma:.12}, multiplicity {mult}");

    let cfg = SimulationConfig {
        alpha,
        truncation: u0.truncation(),
        grid_size: 4 * u0.truncation(),
        t_max: 5.0,
        sample_interval: 0.5,
        audit: AuditLevel::StateOnly,
        ..SimulationConfig::default()
    };
    let traj = integrate(&cfg, &u0)?;
    let orbit = blaschke_orbit_trace(&traj, sigma, 1e-6)?;
    for (i, t) in orbit.times.iter().enumerate() {
        let zs: Vec<String> = orbit.zeros[i].iter().map(|z| format!("{:.12}{:+.2e}i", z.re, z.im)).collect();
        println!("t = {t:>4.1}  angle {:>9.5}  zeros {}", orbit.angles[i], zs.join(", "));
    }
    println!("max zero drift {:.3e}", orbit.worst_drift());
    Ok(())
}
