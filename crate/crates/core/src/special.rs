//! Elliptic integrals and Jacobi elliptic functions on real arguments, and
//! the closed-form crossing oracle for Blaschke-factor data.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

fn check_modulus(k: f64) -> Result<()> {
    if (0.0..1.0).contains(&k) {
        Ok(())
    } else {
        Err(Error::ModulusOutOfRange(k))
    }
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    loop {
        let mu = (x + y + z) / 3.0;
        let dx = 1.0 - x / mu;
        let dy = 1.0 - y / mu;
        let dz = 1.0 - z / mu;
        let eps = dx.abs().max(dy.abs()).max(dz.abs());
        if eps < 1e-4 {
            // fifth-order series, truncation error O(eps^6)
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / mu.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
    }
}

/// Complete integral `K(k) = F(π/2, k)`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    check_modulus(k)?;
    Ok(carlson_rf(0.0, 1.0 - k * k, 1.0))
}

/// Incomplete integral `F(φ, k) = ∫₀^φ dθ / √(1 − k² sin²θ)` for any real `φ`.
pub fn elliptic_f(phi: f64, k: f64) -> Result<f64> {
    check_modulus(k)?;
    let j = (phi / PI).round();
    let r = phi - j * PI;
    let (s, c) = r.sin_cos();
    let base = s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0);
    Ok(base + 2.0 * j * elliptic_k(k)?)
}

/// `(sn, cn, dn)(x, k)` by the descending AGM (Landen) recursion.
pub fn jacobi_sn_cn_dn(x: f64, k: f64) -> Result<(f64, f64, f64)> {
    check_modulus(k)?;
    let mut a = vec![1.0];
    let mut c = vec![k];
    let mut b = (1.0 - k * k).sqrt();
    while c.last().unwrap().abs() > 1e-16 && a.len() < 64 {
        let an = *a.last().unwrap();
        a.push(0.5 * (an + b));
        c.push(0.5 * (an - b));
        b = (an * b).sqrt();
    }
    let n = a.len() - 1;
    let mut phi = (1u64 << n) as f64 * a[n] * x;
    for i in (1..=n).rev() {
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = (1.0 - k * k * sn * sn).sqrt();
    Ok((sn, cn, dn))
}

pub fn jacobi_sn(x: f64, k: f64) -> Result<f64> {
    Ok(jacobi_sn_cn_dn(x, k)?.0)
}

pub fn jacobi_cn(x: f64, k: f64) -> Result<f64> {
    Ok(jacobi_sn_cn_dn(x, k)?.1)
}

/// Parameters of `I(t) = √a cn(√(a+b) t + K(k), k)`, `k² = a/(a+b)`, for the
/// datum `(z − p)/(1 − p̄ z)` at `α = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingOracleParams {
    pub p: Complex64,
    pub a: f64,
    pub b: f64,
    pub modulus: f64,
    pub rate: f64,
    pub phase: f64,
}

impl CrossingOracleParams {
    /// Positive pair with `b − a = 5/4 − 2|p|²` and `ab = |p|²(1 − |p|²)`.
    pub fn new(p: Complex64) -> Result<Self> {
        let r2 = p.norm_sqr();
        if !(r2 > 0.0 && r2 < 1.0) {
            return Err(Error::InvalidInput(format!("need 0 < |p| < 1, got {}", p.norm())));
        }
        let d = 1.25 - 2.0 * r2;
        let q = r2 * (1.0 - r2);
        let a = 0.5 * (-d + (d * d + 4.0 * q).sqrt());
        let b = a + d;
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidInput(format!("no positive root pair for |p| = {}", p.norm())));
        }
        let modulus = (a / (a + b)).sqrt();
        Ok(Self { p, a, b, modulus, rate: (a + b).sqrt(), phase: elliptic_k(modulus)? })
    }

    /// Zeros of `I` on `[0, t_max]`: `t_j = 2jK/√(a+b)`.
    pub fn zeros(&self, t_max: f64) -> Vec<f64> {
        let step = 2.0 * self.phase / self.rate;
        (0..).map(|j| j as f64 * step).take_while(|&t| t <= t_max).collect()
    }
}

/// `I(t)`, with `I(0) = 0`.
pub fn crossing_oracle_i(t: f64, params: &CrossingOracleParams) -> f64 {
    let cn = jacobi_cn(params.rate * t + params.phase, params.modulus).expect("modulus checked at construction");
    params.a.sqrt() * cn
}

/// `(ρ₁², ρ₂²) = (1 + I(t), 1 − I(t))`.
pub fn crossing_oracle_spectra(t: f64, params: &CrossingOracleParams) -> (f64, f64) {
    let i = crossing_oracle_i(t, params);
    (1.0 + i, 1.0 - i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn elliptic_f_examples() {
        assert!((elliptic_f(0.83, 0.0).unwrap() - 0.83).abs() < 1e-15);
        assert!((elliptic_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((elliptic_f(FRAC_PI_2, 0.5).unwrap() - 1.6857503548125961).abs() < 1e-14);
        assert!(matches!(elliptic_f(1.0, 1.0), Err(Error::ModulusOutOfRange(_))));
    }

    #[test]
    fn elliptic_f_against_quadrature() {
        for &k in &[0.1, 0.5, 0.9, 0.99] {
            for &phi in &[0.3, 1.2, 2.5, 4.0, -1.7] {
                let f = |t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt();
                let q = simpson(&f, 0.0, phi, 20000);
                let v = elliptic_f(phi, k).unwrap();
                assert!((v - q).abs() < 1e-12 * v.abs().max(1.0), "k={k} phi={phi}: {v} vs {q}");
            }
        }
    }

    #[test]
    fn jacobi_identities() {
        assert_eq!(jacobi_sn_cn_dn(0.0, 0.7).unwrap().0, 0.0);
        assert_eq!(jacobi_cn(0.0, 0.7).unwrap(), 1.0);
        for &x in &[0.1, 1.3, 4.0, -2.2, 17.5] {
            assert!((jacobi_cn(x, 0.0).unwrap() - x.cos()).abs() < 1e-14);
            for &k in &[0.0, 0.3, 0.8, 0.999] {
                let (s, c, _) = jacobi_sn_cn_dn(x, k).unwrap();
                assert!((s * s + c * c - 1.0).abs() < 1e-12);
            }
        }
        for &k in &[0.2, 0.6, 0.95] {
            for &phi in &[0.2, 1.0, 1.5, 2.7, -0.9] {
                let f = elliptic_f(phi, k).unwrap();
                assert!((jacobi_cn(f, k).unwrap() - phi.cos()).abs() < 1e-10);
                assert!((jacobi_sn(f, k).unwrap() - phi.sin()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn oracle_parameters_for_half() {
        let p = CrossingOracleParams::new(Complex64::new(0.5, 0.0)).unwrap();
        assert!((p.a - 0.197822).abs() < 1e-6);
        assert!((p.b - 0.947822).abs() < 1e-6);
        assert!((p.a * p.b - 0.1875).abs() < 1e-14);
        assert!((p.b - p.a - 0.75).abs() < 1e-14);
        assert!(p.modulus > 0.0 && p.modulus < 1.0);
    }

    #[test]
    fn oracle_behaviour() {
        let p = CrossingOracleParams::new(Complex64::new(0.5, 0.0)).unwrap();
        assert!(crossing_oracle_i(0.0, &p).abs() < 1e-15);
        assert!((crossing_oracle_spectra(0.0, &p).0 - 1.0).abs() < 1e-15);
        let dt = 1e-5;
        for j in 0..200 {
            let t = 0.05 * j as f64 + 0.013;
            let i = crossing_oracle_i(t, &p);
            assert!(i.abs() <= p.a.sqrt() + 1e-15);
            let (r1, r2) = crossing_oracle_spectra(t, &p);
            assert!((r1 + r2 - 2.0).abs() < 1e-15);
            let d = (crossing_oracle_i(t + dt, &p) - crossing_oracle_i(t - dt, &p)) / (2.0 * dt);
            let res = d * d - (p.a - i * i) * (p.b + i * i);
            assert!(res.abs() < 1e-8, "t={t} res={res}");
        }
        for t in p.zeros(10.0) {
            assert!(crossing_oracle_i(t, &p).abs() < 1e-12);
        }
    }
}
