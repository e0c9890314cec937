//! Built-in initial data and external data loading.

use std::path::Path;

use num_complex::Complex64;
use rand::Rng;

use crate::blaschke::{compose_with_blaschke, lift_plan, BlaschkeProduct};
use crate::error::{Error, Result};
use crate::grid::GridPlan;
use crate::invariants::hierarchy_l;
use crate::rational::{rational_to_fourier, RationalState};
use crate::spectral::{decompose, effective_size, ranks, Family, DEFAULT_CLUSTER_REL_TOL};
use crate::state::{FourierState, DEFAULT_TAIL_TOL};

/// Relative tolerance for `L₁(u₀) = 0`.
pub const L1_TOL: f64 = 1e-10;

/// Largest section used to read off the rank of a datum; FFT round-off
/// keeps every coefficient of a composed state near 1e-16.
pub const RANK_SECTION: usize = 64;

fn l1(u: &FourierState, alpha: f64) -> f64 {
    let plan = GridPlan::for_truncation(u.truncation());
    hierarchy_l(u, alpha, 1, &plan)[1]
}

/// `u₀ = √α + c z`, for which `L₁ = c²(α − α) = 0`.
pub fn builtin_growth_datum(alpha: f64, c: f64, n: usize) -> Result<FourierState> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidInput(format!("growth datum needs α > 0, got {alpha}")));
    }
    if c == 0.0 {
        return Err(Error::InvalidInput("growth datum needs c ≠ 0 (no K-level otherwise)".into()));
    }
    if n < 2 {
        return Err(Error::InvalidInput("growth datum needs N ≥ 2".into()));
    }
    let u = FourierState::from_real(n, &[alpha.sqrt(), c]);
    let l = l1(&u, alpha);
    if l.abs() > L1_TOL * (alpha + c * c) {
        return Err(Error::AssemblyCheck(format!("L1(u0) = {l:e}, expected 0")));
    }
    let dec = decompose(&u, n.min(8), DEFAULT_CLUSTER_REL_TOL)?;
    let pos: Vec<_> = dec.k_levels.iter().filter(|l| l.value > 0.0).collect();
    if pos.len() != 1 || pos[0].multiplicity != 1 || (pos[0].value - c.abs()).abs() > 1e-10 * c.abs() {
        return Err(Error::AssemblyCheck(format!("Σ_K(u0) is not {{|c|}}: {:?}", dec.sigmas())));
    }
    Ok(u)
}

/// `ũ₀(z) = u₀(zχ(z))` for the growth datum at `n_base` modes; the result
/// has `(deg χ + 1)·n_base` modes.
pub fn builtin_lifted_datum(alpha: f64, c: f64, chi: &BlaschkeProduct, n_base: usize) -> Result<FourierState> {
    let base = builtin_growth_datum(alpha, c, n_base)?;
    let plan = lift_plan(n_base, chi);
    let lifted = compose_with_blaschke(&base, chi, &plan)?;
    let l = l1(&lifted, alpha);
    if l.abs() > L1_TOL * (alpha + c * c) {
        return Err(Error::AssemblyCheck(format!("L1 of lifted datum = {l:e}, expected 0")));
    }
    let expected = chi.degree() + 1;
    let small = lifted.resized(effective_size(&lifted, 1e-16).clamp(2 * expected + 2, RANK_SECTION).min(lifted.truncation()));
    let r = ranks(&small, 1e-10)?;
    if r.rank_k != expected {
        return Err(Error::AssemblyCheck(format!("rk K of lifted datum = {}, expected {expected}", r.rank_k)));
    }
    Ok(lifted)
}

/// `(z − p)/(1 − p̄z)` as a state of `n` modes.
pub fn blaschke_factor_datum(p: Complex64, n: usize) -> Result<FourierState> {
    let r = RationalState::new(vec![-p, Complex64::from(1.0)], vec![Complex64::from(1.0), -p.conj()])?;
    rational_to_fourier(&r, n, DEFAULT_TAIL_TOL)
}

/// If `u` (or its rational form) is a single Blaschke factor, its zero.
pub fn blaschke_factor_zero(r: &RationalState) -> Option<Complex64> {
    let (a, b) = (r.numer(), r.denom());
    if a.len() != 2 || b.len() != 2 || b[0].norm() == 0.0 {
        return None;
    }
    let (a0, a1) = (a[0] / b[0], a[1] / b[0]);
    let b1 = b[1] / b[0];
    let p = -a0;
    let ok = (a1 - 1.0).norm() < 1e-12 && (b1 + p.conj()).norm() < 1e-12 && p.norm() > 0.0;
    ok.then_some(p)
}

/// Random element of `𝓛(rank)`: `A/B` with `deg A = deg B = rank`, poles of
/// modulus in `[2, 3]`.
pub fn random_rational_state(rng: &mut impl Rng, rank: usize) -> Result<RationalState> {
    let mut denom = vec![Complex64::from(1.0)];
    for _ in 0..rank {
        let b = Complex64::from_polar(rng.random_range(2.0..3.0), rng.random_range(0.0..std::f64::consts::TAU));
        let mut next = vec![Complex64::default(); denom.len() + 1];
        for (k, c) in denom.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c / b;
        }
        denom = next;
    }
    let numer: Vec<Complex64> = (0..=rank)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    RationalState::new(numer, denom)
}

/// Reads `{"A", "B"}` rational data or a `{"N", "coeffs"}` state.
pub fn load_datum(path: &Path, n: usize) -> Result<(FourierState, Option<RationalState>)> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("A").is_some() {
        let r: RationalState = serde_json::from_value(value)?;
        let u = rational_to_fourier(&r, n, DEFAULT_TAIL_TOL)?;
        Ok((u, Some(r)))
    } else {
        let u: FourierState = serde_json::from_value(value)?;
        Ok((u.resized(n), None))
    }
}

/// Positive K-level of largest multiplicity (ties to the largest σ).
pub fn widest_k_level(u: &FourierState) -> Result<(f64, usize)> {
    let m = effective_size(u, 1e-15).clamp(2, u.truncation());
    let dec = decompose(u, m, DEFAULT_CLUSTER_REL_TOL)?;
    dec.k_levels
        .iter()
        .filter(|l| l.value > 0.0 && l.family == Family::K)
        .max_by(|a, b| a.multiplicity.cmp(&b.multiplicity).then(a.value.total_cmp(&b.value)))
        .map(|l| (l.value, l.multiplicity))
        .ok_or(Error::LevelNotFound(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn growth_datum_examples() {
        let u = builtin_growth_datum(1.0, 1.0, 16).unwrap();
        assert_eq!(u.coeff(0), Complex64::from(1.0));
        assert_eq!(u.coeff(1), Complex64::from(1.0));
        let u = builtin_growth_datum(4.0, 1.0, 16).unwrap();
        assert_eq!(u.coeff(0), Complex64::from(2.0));
        assert!(builtin_growth_datum(1.0, 0.0, 16).is_err());
        assert!(builtin_growth_datum(-1.0, 1.0, 16).is_err());
    }

    #[test]
    fn lifted_datum_examples() {
        let u = builtin_lifted_datum(1.0, 1.0, &BlaschkeProduct::z(), 16).unwrap();
        assert_eq!(u.truncation(), 32);
        let expect = FourierState::from_real(32, &[1.0, 0.0, 1.0]);
        assert!(u.max_abs_diff(&expect) < 1e-13);
        let u = builtin_lifted_datum(1.0, 1.0, &BlaschkeProduct::identity(), 16).unwrap();
        assert!(u.max_abs_diff(&FourierState::from_real(16, &[1.0, 1.0])) < 1e-13);
        let chi = BlaschkeProduct::factor(Complex64::from(0.3)).unwrap();
        let u = builtin_lifted_datum(1.0, 1.0, &chi, 32).unwrap();
        assert!(l1(&u, 1.0).abs() < 1e-10);
    }

    #[test]
    fn factor_round_trip() {
        let p = Complex64::new(0.3, -0.2);
        let r = RationalState::new(vec![-p, Complex64::from(1.0)], vec![Complex64::from(1.0), -p.conj()]).unwrap();
        assert_eq!(blaschke_factor_zero(&r), Some(p));
        assert_eq!(blaschke_factor_zero(&RationalState::from_real(&[1.0, 1.0], &[1.0]).unwrap()), None);
        let u = blaschke_factor_datum(Complex64::from(0.5), 64).unwrap();
        assert!((u.coeff(1).re - 0.75).abs() < 1e-15);
    }

    #[test]
    fn random_states_have_requested_rank() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let r = random_rational_state(&mut rng, 2).unwrap();
            assert_eq!(r.rank(), 2);
            let u = rational_to_fourier(&r, 64, DEFAULT_TAIL_TOL).unwrap();
            assert_eq!(ranks(&u.resized(32), 1e-6).unwrap().rank_k, 2);
        }
    }
}
