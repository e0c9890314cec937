//! Finite Blaschke products `Ψ(z) = e^{−iψ} Π (z − p_j)/(1 − conj(p_j) z)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridPlan;
use crate::poly;
use crate::state::FourierState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    /// `ψ` in radians, reduced to `[0, 2π)`.
    pub angle: f64,
    pub zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(angle: f64, zeros: Vec<Complex64>) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::InvalidInput("Blaschke angle must be finite".into()));
        }
        if let Some(p) = zeros.iter().find(|p| !(p.norm() < 1.0)) {
            return Err(Error::InvalidInput(format!("Blaschke zero {p} not in the open disc")));
        }
        Ok(Self { angle: angle.rem_euclid(std::f64::consts::TAU), zeros })
    }

    /// `Ψ ≡ 1`.
    pub fn identity() -> Self {
        Self { angle: 0.0, zeros: Vec::new() }
    }

    /// `Ψ(z) = z`.
    pub fn z() -> Self {
        Self { angle: 0.0, zeros: vec![Complex64::default()] }
    }

    /// Single factor `(z − p)/(1 − conj(p) z)`.
    pub fn factor(p: Complex64) -> Result<Self> {
        Self::new(0.0, vec![p])
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// `e^{−iψ}`.
    pub fn phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, -self.angle)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(self.phase(), |acc, &p| acc * (z - p) / (1.0 - p.conj() * z))
    }

    /// Monic numerator `P(z) = Π (z − p_j)`.
    pub fn numerator(&self) -> Vec<Complex64> {
        poly::from_roots(&self.zeros)
    }

    /// Normalized denominator `D(z) = z^d conj(P(1/conj z)) = Π (1 − conj(p_j) z)`.
    pub fn denominator(&self) -> Vec<Complex64> {
        self.numerator().iter().rev().map(|c| c.conj()).collect()
    }

    /// Largest deviation of `|Ψ|` from one over `samples` circle points.
    pub fn unimodularity_defect(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|j| {
                let z = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / samples as f64);
                (self.eval(z).norm() - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

pub fn blaschke_eval(psi: &BlaschkeProduct, z: Complex64) -> Complex64 {
    psi.eval(z)
}

/// Relative amplitude above which discarded modes count as aliasing.
pub const ALIAS_TOL: f64 = 1e-12;

/// Coefficients of `u(z χ(z))` truncated to `plan.truncation()` modes.
///
/// The inner function `zχ` is evaluated on the plan grid and `u` is summed
/// there by Horner's rule. Negative frequencies and modes past the output
/// truncation must vanish to `ALIAS_TOL · max(1, ‖u‖)`.
pub fn compose_with_blaschke(
    u: &FourierState,
    chi: &BlaschkeProduct,
    plan: &GridPlan,
) -> Result<FourierState> {
    let out_n = plan.truncation();
    let head = poly::trim(u.coeffs(), 0.0);
    let values: Vec<Complex64> = plan
        .points()
        .into_iter()
        .map(|z| poly::eval(&head, z * chi.eval(z)))
        .collect();
    let full = plan.from_grid(&values);
    let beyond = (out_n as i64..=full.max_freq())
        .map(|f| full.at(f).norm())
        .fold(full.negative_amplitude(), f64::max);
    if beyond > ALIAS_TOL * u.l2_norm().max(1.0) {
        return Err(Error::Aliasing { truncation: out_n, residual: beyond });
    }
    FourierState::new((0..out_n as i64).map(|f| full.at(f)).collect())
}

/// Output truncation `(deg χ + 1)·N` with a grid large enough to expose any
/// aliasing.
pub fn lift_plan(n: usize, chi: &BlaschkeProduct) -> GridPlan {
    let out = (chi.degree() + 1) * n;
    GridPlan::new(out, (4 * out).next_power_of_two()).expect("grid is admissible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::inner_product;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluation_examples() {
        let z = BlaschkeProduct::z();
        for th in [0.0, 0.7, 2.9, -1.3] {
            let w = Complex64::from_polar(1.0, th);
            assert!((z.eval(w) - w).norm() < 1e-15);
        }
        let half = BlaschkeProduct::factor(c(0.5, 0.0)).unwrap();
        assert_eq!(half.eval(c(0.5, 0.0)), c(0.0, 0.0));
        let psi = BlaschkeProduct::new(1.1, vec![c(0.3, -0.2), c(-0.8, 0.1), c(0.0, 0.9)]).unwrap();
        assert!(psi.unimodularity_defect(64) < 1e-12);
    }

    #[test]
    fn numerator_and_reflected_denominator() {
        let psi = BlaschkeProduct::new(0.4, vec![c(0.3, 0.1), c(-0.5, 0.2)]).unwrap();
        let p = psi.numerator();
        let d = psi.denominator();
        for th in [0.2, 1.7, 4.0] {
            let z = Complex64::from_polar(0.6, th);
            let ratio = psi.phase() * poly::eval(&p, z) / poly::eval(&d, z);
            assert!((ratio - psi.eval(z)).norm() < 1e-14);
            // D(z) = z^d conj(P(1/conj z))
            let refl = z * z * poly::eval(&p, 1.0 / z.conj()).conj();
            assert!((refl - poly::eval(&d, z)).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_zero_outside_disc() {
        assert!(BlaschkeProduct::factor(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn substitution_examples() {
        let u = FourierState::from_real(8, &[1.0, 1.0]);
        let chi = BlaschkeProduct::z();
        let lifted = compose_with_blaschke(&u, &chi, &lift_plan(8, &chi)).unwrap();
        assert!(lifted.max_abs_diff(&FourierState::from_real(16, &[1.0, 0.0, 1.0])) < 1e-15);

        let id = BlaschkeProduct::identity();
        let same = compose_with_blaschke(&u, &id, &lift_plan(8, &id)).unwrap();
        assert!(same.max_abs_diff(&u) < 1e-15);

        // z (z − 0.5)/(1 − 0.5 z)
        let z = FourierState::from_real(32, &[0.0, 1.0]);
        let chi = BlaschkeProduct::factor(c(0.5, 0.0)).unwrap();
        let w = compose_with_blaschke(&z, &chi, &lift_plan(32, &chi)).unwrap();
        assert!(w.coeff(0).norm() < 1e-15);
        assert!((w.coeff(1) - c(-0.5, 0.0)).norm() < 1e-15);
        for k in 2..40 {
            let want = 0.75 * 0.5f64.powi(k as i32 - 2);
            assert!((w.coeff(k) - c(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn substitution_preserves_pairings() {
        let u = FourierState::new(vec![c(0.7, 0.1), c(-0.2, 0.4), c(0.05, 0.0), c(0.0, 0.3)]).unwrap();
        let v = FourierState::new(vec![c(0.1, -0.6), c(0.3, 0.0), c(-0.2, 0.2), c(0.4, 0.1)]).unwrap();
        let chi = BlaschkeProduct::new(0.9, vec![c(0.2, 0.3)]).unwrap();
        let plan = GridPlan::new(96, 512).unwrap();
        let ut = compose_with_blaschke(&u, &chi, &plan).unwrap();
        let vt = compose_with_blaschke(&v, &chi, &plan).unwrap();
        assert!((inner_product(&ut, &vt) - inner_product(&u, &v)).norm() < 1e-10);
        assert!((ut.coeff(0) - u.coeff(0)).norm() < 1e-10);
    }

    #[test]
    fn short_output_is_aliasing() {
        let u = FourierState::from_real(8, &[1.0, 1.0, 1.0, 1.0]);
        let chi = BlaschkeProduct::z();
        let plan = GridPlan::new(4, 64).unwrap();
        assert!(matches!(compose_with_blaschke(&u, &chi, &plan), Err(Error::Aliasing { .. })));
    }
}
