//! Loads a rational datum A/B from JSON, samples its Fourier series and
//! checks the Kronecker rank.
//!
//!     cargo run --example rational_ingestion -- datum.json

use szego_lab::experiments::data::load_datum;
use szego_lab::rational::recurrence_residual;
use szego_lab::spectral::{pole_radius, ranks};
use szego_lab::RationalState;

fn main() -> szego_lab::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => std::path::PathBuf::from(p),
        None => {
            let r = RationalState::from_real(&[1.0, -0.2, 0.5], &[1.0, -0.6, 0.08])?;
            let p = std::env::temp_dir().join("szego_rational_datum.json");
            std::fs::write(&p, serde_json::to_string_pretty(&r)?)?;
            println!("no file given, wrote {}", p.display());
            p
        }
    };
    let (u, r) = load_datum(&path, 128)?;
    let r = r.expect("file holds A and B");
    println!("deg A = {}, deg B = {}, rank {}", r.numer().len() - 1, r.denom().len() - 1, r.rank());
    println!("pole distance {:.6}, fitted pole radius {:.6}", r.pole_distance(), pole_radius(&u));
    println!("recurrence residual {:.2e}, tail {:.2e}", recurrence_residual(&r, &u), u.tail_amplitude());
    let rk = ranks(&u.resized(64), 1e-10)?;
    println!("rk H = {}, rk K = {}", rk.rank_h, rk.rank_k);
    Ok(())
}
