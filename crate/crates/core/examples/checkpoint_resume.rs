//! Saves a checkpoint at the end of a run and resumes from it; the resumed
//! run continues the same trajectory.

use szego_lab::integrator::{integrate, AuditLevel, Checkpoint, SimulationConfig};
use szego_lab::FourierState;

fn main() -> szego_lab::Result<()> {
    let mut cfg = SimulationConfig {
        alpha: -1.0,
        truncation: 64,
        grid_size: 256,
        t_max: 2.0,
        sample_interval: 0.5,
        audit: AuditLevel::StateOnly,
        ..SimulationConfig::default()
    };
    let u0 = FourierState::from_real(64, &[0.6, 0.4]);
    let first = integrate(&cfg, &u0)?;
    let path = std::env::temp_dir().join("szego_checkpoint.json");
    Checkpoint::from_record(&first).expect("non-empty run").save(&path)?;

    let resumed = Checkpoint::load(&path)?.resume()?;
    cfg.t_max = 2.0 * first.end_time;
    let straight = integrate(&cfg, &u0)?;
    let (a, b) = (resumed.samples.last().expect("sample"), straight.samples.last().expect("sample"));
    println!("resumed to t = {}, straight to t = {}", a.t, b.t);
    println!("difference {:.3e}", a.state.l2_distance(&b.state));
    Ok(())
}
