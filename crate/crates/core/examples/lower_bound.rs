//! ‖(1 − p̄Ψ)⁻¹‖ in H^s as |p| → 1: the log-log slope against the bound
//! −(s + 1/2).

use num_complex::Complex64;
use szego_lab::experiments::analysis::{blaschke_lower_bound_check, default_p_sequence};
use szego_lab::BlaschkeProduct;

fn main() -> szego_lab::Result<()> {
    let ps = default_p_sequence();
    let psis = [
        ("z", BlaschkeProduct::z()),
        ("(0.3, −0.4)", BlaschkeProduct::new(0.0, vec![Complex64::new(0.3, 0.0), Complex64::new(-0.4, 0.0)])?),
    ];
    for (label, psi) in &psis {
        for s in [0.0, 0.25, 0.5, 0.75] {
            let rep = blaschke_lower_bound_check(psi, s, &ps)?;
            println!(
                "Ψ = {label:<12} s = {s:<4} slope {:>8.5} (bound {:>6.3}) R² {:.6} {}",
                rep.slope,
                rep.bound,
                rep.r_squared,
                if rep.passed { "ok" } else { "VIOLATED" }
            );
        }
    }
    Ok(())
}
