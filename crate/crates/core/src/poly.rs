//! Dense complex polynomials in ascending coefficient order.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Horner evaluation of `Σ c_j z^j`.
pub fn eval(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::default(), |acc, &a| acc * z + a)
}

fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::default();
    let mut dp = Complex64::default();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Drops leading (highest-degree) coefficients below `tol · max|c|`.
pub fn trim(c: &[Complex64], tol: f64) -> Vec<Complex64> {
    let scale = c.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut end = c.len();
    while end > 1 && c[end - 1].norm() <= tol * scale {
        end -= 1;
    }
    c[..end].to_vec()
}

pub fn degree(c: &[Complex64]) -> usize {
    trim(c, 0.0).len().saturating_sub(1)
}

/// Monic polynomial `Π (z − r_j)`.
pub fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::default(); c.len() + 1];
        for (j, &a) in c.iter().enumerate() {
            next[j + 1] += a;
            next[j] -= a * r;
        }
        c = next;
    }
    c
}

pub fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Roots as eigenvalues of the companion matrix, refined by Newton steps on
/// the original polynomial.
pub fn roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let c = trim(c, 0.0);
    let deg = c.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = c[deg];
    if deg == 1 {
        return Ok(vec![-c[0] / lead]);
    }
    let mut comp = DMatrix::<Complex64>::zeros(deg, deg);
    for j in 1..deg {
        comp[(j, j - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i] / lead;
    }
    let eig = comp
        .eigenvalues()
        .ok_or_else(|| Error::InvalidInput("companion eigenvalues did not converge".into()))?;
    let mut out: Vec<Complex64> = eig.iter().copied().collect();
    for r in &mut out {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&c, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            let cand = *r - step;
            if eval(&c, cand).norm() <= p.norm() {
                *r = cand;
            } else {
                break;
            }
        }
    }
    Ok(out)
}
