//! Poisson brackets of the generating functionals on a random rank-2
//! state, by finite-difference gradients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use szego_lab::experiments::random_rational_state;
use szego_lab::hankel::{hankel_square, operator_norm};
use szego_lab::invariants::{default_fd_step, generating_values, poisson_bracket, Functional};
use szego_lab::{rational_to_fourier, GridPlan};

fn main() -> szego_lab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let alpha = 1.0;
    let u = rational_to_fourier(&random_rational_state(&mut rng, 2)?, 64, 1e-12)?;
    let plan = GridPlan::new(64, 256)?;
    let lam = operator_norm(&hankel_square(&u, 64)?.entries);
    let h = default_fd_step(&u);

    for _ in 0..4 {
        let x = rng.random_range(0.05..0.45) / lam;
        let y = rng.random_range(0.05..0.45) / lam;
        let b = poisson_bracket(Functional::Lx(x), Functional::Lx(y), &u, alpha, &plan, 64, h)?;
        println!("{{L_{x:.4}, L_{y:.4}}} = {:+.3e} (normalized {:.3e})", b.bracket, b.normalized);
    }
    let b = poisson_bracket(Functional::Energy, Functional::Lx(0.1 / lam), &u, alpha, &plan, 64, h)?;
    println!("{{E, L_x}} normalized {:.3e}", b.normalized);
    let b = poisson_bracket(Functional::Mass, Functional::Momentum, &u, alpha, &plan, 64, h)?;
    println!("{{Q, M}} normalized {:.3e}", b.normalized);

    let g = generating_values(&u, alpha, 0.3 / lam, 64)?;
    let (r1, r2) = g.relation_residuals();
    println!("J = {:.12}, relation residuals {r1:.2e} {r2:.2e}", g.j);
    Ok(())
}
