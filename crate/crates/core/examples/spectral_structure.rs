//! Spectral data of H_u and K_u for a random rational state: interlacing,
//! the closed-form projection norms, the sum rule and reconstruction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use szego_lab::experiments::random_rational_state;
use szego_lab::spectral::{
    decompose, ranks, reconstruction_residuals, sum_rule_residuals, verify_projection_norms, DEFAULT_CLUSTER_REL_TOL,
};
use szego_lab::rational_to_fourier;

fn main() -> szego_lab::Result<()> {
    let seed: u64 = std::env::args().nth(1).map_or(11, |s| s.parse().expect("seed"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = random_rational_state(&mut rng, 3)?;
    let u = rational_to_fourier(&r, 64, 1e-12)?;
    let rk = ranks(&u, 1e-10)?;
    println!("rk H = {}, rk K = {}", rk.rank_h, rk.rank_k);

    let dec = decompose(&u, 64, DEFAULT_CLUSTER_REL_TOL)?;
    for (j, h) in dec.h_levels.iter().enumerate() {
        let k = dec.k_levels.get(j).map_or("-".into(), |k| format!("{:.10}", k.value));
        println!("ρ{} = {:.10}   σ{} = {k}", j + 1, h.value, j + 1);
    }
    println!("interlaced: {}", dec.is_interlaced());
    for c in verify_projection_norms(&dec) {
        println!("{:?} {:.6}: ‖proj‖² {:.12} formula {:.12}", c.family, c.value, c.measured, c.formula);
    }
    let sum = sum_rule_residuals(&dec).into_iter().fold(0.0, f64::max);
    let (rh, rk) = reconstruction_residuals(&u, &dec);
    println!("sum rule {sum:.2e}, reconstruction H {rh:.2e} K {rk:.2e}");
    Ok(())
}
