//! Rational states `u = A/B` with no poles in the closed disc.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;
use crate::state::{from_pairs, to_pairs, FourierState};

/// Root-distance tolerance used for the pole and coprimality tests.
pub const ROOT_TOL: f64 = 1e-9;

/// Coprime pair `(A, B)` in ascending coefficient order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RationalFile", into = "RationalFile")]
pub struct RationalState {
    numer: Vec<Complex64>,
    denom: Vec<Complex64>,
}

impl RationalState {
    /// Validates the pair: `B` has no root in the closed disc and `A`, `B`
    /// share no root.
    pub fn new(numer: Vec<Complex64>, denom: Vec<Complex64>) -> Result<Self> {
        let numer = poly::trim(&numer, 0.0);
        let denom = poly::trim(&denom, 0.0);
        if numer.is_empty() || denom.is_empty() || denom.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::InvalidInput("A and B must be non-empty, B non-zero".into()));
        }
        let broots = poly::roots(&denom)?;
        if let Some(m) = broots.iter().map(|r| r.norm()).reduce(f64::min) {
            if m <= 1.0 + ROOT_TOL {
                return Err(Error::PoleInDisc { modulus: m });
            }
        }
        if numer.iter().any(|c| c.norm() > 0.0) {
            let aroots = poly::roots(&numer)?;
            let d = aroots
                .iter()
                .flat_map(|a| broots.iter().map(move |b| (a - b).norm()))
                .fold(f64::INFINITY, f64::min);
            if d <= ROOT_TOL {
                return Err(Error::CommonRoot { distance: d });
            }
        }
        Ok(Self { numer, denom })
    }

    pub fn from_real(numer: &[f64], denom: &[f64]) -> Result<Self> {
        let f = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(f(numer), f(denom))
    }

    pub fn numer(&self) -> &[Complex64] {
        &self.numer
    }

    pub fn denom(&self) -> &[Complex64] {
        &self.denom
    }

    /// `max(deg A, deg B)`: the rank of the shifted Hankel operator.
    pub fn rank(&self) -> usize {
        poly::degree(&self.numer).max(poly::degree(&self.denom))
    }

    /// Smallest modulus among the roots of `B` (infinite for constant `B`).
    pub fn pole_distance(&self) -> f64 {
        poly::roots(&self.denom)
            .map(|r| r.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min))
            .unwrap_or(f64::INFINITY)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        poly::eval(&self.numer, z) / poly::eval(&self.denom, z)
    }
}

/// Power-series coefficients of `A/B` up to `k = n−1`, from the recurrence
/// `Σ_j B_j û(k−j) = A_k`.
pub fn rational_to_fourier(r: &RationalState, n: usize, tail_tol: f64) -> Result<FourierState> {
    let b0 = r.denom[0];
    let mut c = vec![Complex64::default(); n];
    for k in 0..n {
        let mut acc = r.numer.get(k).copied().unwrap_or_default();
        for (j, &bj) in r.denom.iter().enumerate().skip(1).take(k) {
            acc -= bj * c[k - j];
        }
        c[k] = acc / b0;
    }
    let u = FourierState::new(c)?;
    u.ensure_resolved(tail_tol)?;
    Ok(u)
}

/// Largest recurrence residual `|Σ_j B_j û(k−j) − A_k|` over `k < N`.
pub fn recurrence_residual(r: &RationalState, u: &FourierState) -> f64 {
    (0..u.truncation())
        .map(|k| {
            let lhs: Complex64 = r
                .denom
                .iter()
                .enumerate()
                .take(k + 1)
                .map(|(j, &bj)| bj * u.coeff(k - j))
                .sum();
            (lhs - r.numer.get(k).copied().unwrap_or_default()).norm()
        })
        .fold(0.0, f64::max)
}

#[derive(Serialize, Deserialize)]
struct RationalFile {
    #[serde(rename = "A")]
    a: Vec<[f64; 2]>,
    #[serde(rename = "B")]
    b: Vec<[f64; 2]>,
}

impl From<RationalState> for RationalFile {
    fn from(r: RationalState) -> Self {
        Self { a: to_pairs(&r.numer), b: to_pairs(&r.denom) }
    }
}

impl TryFrom<RationalFile> for RationalState {
    type Error = Error;

    fn try_from(f: RationalFile) -> Result<Self> {
        RationalState::new(from_pairs(&f.a), from_pairs(&f.b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn blaschke_factor_expansion() {
        let r = RationalState::from_real(&[-0.5, 1.0], &[1.0, -0.5]).unwrap();
        let u = rational_to_fourier(&r, 64, 1e-12).unwrap();
        assert!((u.coeff(0) - c(-0.5)).norm() < 1e-15);
        for k in 1..64 {
            let want = 0.75 * 0.5f64.powi(k as i32 - 1);
            assert!((u.coeff(k) - c(want)).norm() < 1e-15);
        }
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn polynomial_passthrough() {
        let one = RationalState::from_real(&[1.0], &[1.0]).unwrap();
        let u = rational_to_fourier(&one, 8, 1e-12).unwrap();
        assert_eq!(u, FourierState::from_real(8, &[1.0]));
        let p = RationalState::from_real(&[1.0, 1.0], &[1.0]).unwrap();
        let u = rational_to_fourier(&p, 8, 1e-12).unwrap();
        assert_eq!(u, FourierState::from_real(8, &[1.0, 1.0]));
    }

    #[test]
    fn rejects_invalid_pairs() {
        // pole at z = 2/3 inside the disc
        assert!(matches!(
            RationalState::from_real(&[1.0], &[1.0, -1.5]),
            Err(Error::PoleInDisc { .. })
        ));
        // pole on the circle
        assert!(matches!(
            RationalState::from_real(&[1.0], &[1.0, -1.0]),
            Err(Error::PoleInDisc { .. })
        ));
        // (z − 2)/(z − 2)
        assert!(matches!(
            RationalState::from_real(&[-2.0, 1.0], &[-2.0, 1.0]),
            Err(Error::CommonRoot { .. })
        ));
    }

    #[test]
    fn slow_decay_is_unresolved() {
        let r = RationalState::from_real(&[1.0], &[1.0, -0.99]).unwrap();
        assert!(matches!(rational_to_fourier(&r, 32, 1e-12), Err(Error::Unresolved { .. })));
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"A": [[-0.5, 0.0], [1.0, 0.0]], "B": [[1.0, 0.0], [-0.5, 0.0]]}"#;
        let r: RationalState = serde_json::from_str(s).unwrap();
        assert_eq!(r.rank(), 1);
        let back: RationalState = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<RationalState>(r#"{"A": [[1,0]], "B": [[1,0],[-2,0]]}"#).is_err());
    }
}
