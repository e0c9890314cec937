//! Truncated Hardy-space states and the basic pairings on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tail-resolution threshold.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// A function `u(z) = Σ_{k<N} û(k) z^k` in the Hardy space, stored by its
/// non-negative Fourier coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateFile", into = "StateFile")]
pub struct FourierState {
    coeffs: Vec<Complex64>,
}

impl FourierState {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("state needs at least one mode".into()));
        }
        if let Some(k) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidInput(format!("coefficient {k} is not finite")));
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "truncation must be positive");
        Self { coeffs: vec![Complex64::new(0.0, 0.0); n] }
    }

    /// `c · z^k` truncated to `n` modes.
    pub fn monomial(n: usize, k: usize, c: Complex64) -> Self {
        let mut s = Self::zeros(n);
        s.coeffs[k] = c;
        s
    }

    /// Builds a state from a short coefficient list, zero-padded to `n` modes.
    pub fn from_slice(n: usize, head: &[Complex64]) -> Self {
        assert!(head.len() <= n, "more coefficients than modes");
        let mut s = Self::zeros(n);
        s.coeffs[..head.len()].copy_from_slice(head);
        s
    }

    pub fn from_real(n: usize, head: &[f64]) -> Self {
        let c: Vec<_> = head.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_slice(n, &c)
    }

    /// Number of retained modes `N`.
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `û(k)`, zero beyond the truncation.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Largest modulus among the top eighth of the modes.
    pub fn tail_amplitude(&self) -> f64 {
        let n = self.coeffs.len();
        let start = n - n / 8;
        self.coeffs[start.min(n - 1)..]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_resolved(&self, tol: f64) -> bool {
        self.tail_amplitude() <= tol
    }

    pub fn ensure_resolved(&self, tol: f64) -> Result<()> {
        let tail = self.tail_amplitude();
        if tail <= tol {
            Ok(())
        } else {
            Err(Error::Unresolved { tail, tol })
        }
    }

    /// Copy truncated or zero-padded to `n` modes.
    pub fn resized(&self, n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        let m = n.min(self.coeffs.len());
        coeffs[..m].copy_from_slice(&self.coeffs[..m]);
        Self { coeffs }
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `self + c · other`, truncated to `self`'s length.
    pub fn axpy(&self, c: Complex64, other: &Self) -> Self {
        let mut out = self.clone();
        for (o, x) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *o += c * x;
        }
        out
    }

    /// Largest coefficient difference against another state (zero-padded).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.truncation().max(other.truncation());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    /// L² distance against another state (zero-padded).
    pub fn l2_distance(&self, other: &Self) -> f64 {
        let n = self.truncation().max(other.truncation());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Coefficients of a two-sided trigonometric series, `c[j]` multiplying
/// `e^{i (min_freq + j) θ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSided {
    pub min_freq: i64,
    pub coeffs: Vec<Complex64>,
}

impl TwoSided {
    /// Symmetric series over frequencies `-k..=k`.
    pub fn symmetric(k: usize, f: impl Fn(i64) -> Complex64) -> Self {
        let k = k as i64;
        Self { min_freq: -k, coeffs: (-k..=k).map(f).collect() }
    }

    pub fn at(&self, freq: i64) -> Complex64 {
        let j = freq - self.min_freq;
        if j < 0 {
            return Complex64::default();
        }
        self.coeffs.get(j as usize).copied().unwrap_or_default()
    }

    pub fn max_freq(&self) -> i64 {
        self.min_freq + self.coeffs.len() as i64 - 1
    }

    /// Largest modulus over strictly negative frequencies.
    pub fn negative_amplitude(&self) -> f64 {
        (self.min_freq..0).map(|f| self.at(f).norm()).fold(0.0, f64::max)
    }
}

/// Szegő projector: keeps the non-negative frequencies.
///
/// The output truncation is `max_freq + 1` (at least one mode).
pub fn szego_project(two_sided: &TwoSided) -> FourierState {
    let n = (two_sided.max_freq() + 1).max(1) as usize;
    let coeffs = (0..n as i64).map(|k| two_sided.at(k)).collect();
    FourierState { coeffs }
}

/// `(u|v) = Σ û(k) conj(v̂(k))`, linear in the first slot.
pub fn inner_product(u: &FourierState, v: &FourierState) -> Complex64 {
    u.coeffs.iter().zip(&v.coeffs).map(|(a, b)| a * b.conj()).sum()
}

/// `(Σ (1+k²)^s |û(k)|²)^{1/2}`.
pub fn sobolev_norm(u: &FourierState, s: f64) -> f64 {
    u.coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let k = k as f64;
            (1.0 + k * k).powf(s) * c.norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// On-disk layout: `{"N": int, "coeffs": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct StateFile {
    #[serde(rename = "N")]
    n: usize,
    coeffs: Vec<[f64; 2]>,
}

impl From<FourierState> for StateFile {
    fn from(s: FourierState) -> Self {
        Self { n: s.coeffs.len(), coeffs: to_pairs(&s.coeffs) }
    }
}

impl TryFrom<StateFile> for FourierState {
    type Error = Error;

    fn try_from(f: StateFile) -> Result<Self> {
        if f.coeffs.len() > f.n {
            return Err(Error::InvalidInput(format!(
                "{} coefficients for N = {}",
                f.coeffs.len(),
                f.n
            )));
        }
        let mut c = from_pairs(&f.coeffs);
        c.resize(f.n, Complex64::default());
        FourierState::new(c)
    }
}

pub(crate) fn to_pairs(c: &[Complex64]) -> Vec<[f64; 2]> {
    c.iter().map(|z| [z.re, z.im]).collect()
}

pub(crate) fn from_pairs(p: &[[f64; 2]]) -> Vec<Complex64> {
    p.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn projector_keeps_nonnegative_modes() {
        let two = TwoSided { min_freq: -1, coeffs: vec![c(1.0), c(2.0), c(3.0)] };
        let u = szego_project(&two);
        assert_eq!(u.coeffs(), &[c(2.0), c(3.0)]);

        let zero = TwoSided::symmetric(3, |_| c(0.0));
        assert!(szego_project(&zero).coeffs().iter().all(|x| x.norm() == 0.0));

        // cos θ = (e^{iθ} + e^{-iθ}) / 2
        let cos = TwoSided::symmetric(1, |k| if k.abs() == 1 { c(0.5) } else { c(0.0) });
        assert_eq!(szego_project(&cos).coeffs(), &[c(0.0), c(0.5)]);
    }

    #[test]
    fn pairings() {
        let one_plus_z = FourierState::from_real(4, &[1.0, 1.0]);
        assert_eq!(inner_product(&one_plus_z, &one_plus_z), c(2.0));
        let z = FourierState::from_real(4, &[0.0, 1.0]);
        let one = FourierState::from_real(4, &[1.0]);
        assert_eq!(inner_product(&z, &one), c(0.0));

        assert_eq!(sobolev_norm(&one, 3.7), 1.0);
        assert!((sobolev_norm(&z, 1.0) - 2f64.sqrt()).abs() < 1e-15);
        assert!((sobolev_norm(&one_plus_z, 0.0) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn tail_flag_uses_top_eighth() {
        let mut u = FourierState::zeros(16);
        u.coeffs_mut()[13] = c(1e-3);
        assert!(u.is_resolved(1e-12));
        u.coeffs_mut()[14] = c(1e-3);
        assert!(!u.is_resolved(1e-12));
        assert!(matches!(u.ensure_resolved(1e-12), Err(Error::Unresolved { .. })));
    }

    #[test]
    fn rejects_nonfinite() {
        assert!(FourierState::new(vec![Complex64::new(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn json_layout() {
        let u = FourierState::from_real(3, &[1.0, -2.0]);
        let s = serde_json::to_string(&u).unwrap();
        assert_eq!(s, r#"{"N":3,"coeffs":[[1.0,0.0],[-2.0,0.0],[0.0,0.0]]}"#);
        let back: FourierState = serde_json::from_str(r#"{"N":4,"coeffs":[[1,0]]}"#).unwrap();
        assert_eq!(back.truncation(), 4);
        assert_eq!(back.coeff(0), c(1.0));
    }
}
