//! Hankel, shifted Hankel and Toeplitz operators as finite matrices in the
//! basis `e_k = z^k`.
//!
//! `H_u` and `K_u` are conjugate-linear: the stored matrix `Γ` acts as
//! `h ↦ Γ·conj(h)`. Every composition built here (`H²`, `K²`, `B_u`, `C_u`)
//! is ℂ-linear.
//!
//! With `m = N` all products are exact for a state truncated at `N`: the
//! entries `û(k+ℓ)` with `k+ℓ ≥ N` vanish, so no anti-diagonal is lost.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridPlan;
use crate::state::{FourierState, TwoSided};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    HankelH,
    ShiftedHankelK,
    Toeplitz,
    HankelSquare,
    KSquare,
    Bu,
    Cu,
}

impl OperatorKind {
    /// Whether the operator acts on `conj(h)` rather than `h`.
    pub fn is_antilinear(self) -> bool {
        matches!(self, Self::HankelH | Self::ShiftedHankelK)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub kind: OperatorKind,
    pub entries: CMatrix,
}

impl OperatorMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// Applies the operator to coefficient vector `h`, conjugating the input
    /// for the antilinear kinds.
    pub fn apply(&self, h: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(h.len(), self.size(), "vector length mismatch");
        let v = if self.kind.is_antilinear() {
            nalgebra::DVector::from_iterator(h.len(), h.iter().map(|c| c.conj()))
        } else {
            nalgebra::DVector::from_column_slice(h)
        };
        (&self.entries * v).iter().copied().collect()
    }
}

fn check_size(u: &FourierState, m: usize) -> Result<()> {
    if m == 0 || m > u.truncation() {
        return Err(Error::InvalidInput(format!(
            "matrix size {m} must lie in 1..={}",
            u.truncation()
        )));
    }
    Ok(())
}

fn hankel_with_offset(u: &FourierState, m: usize, offset: usize) -> CMatrix {
    CMatrix::from_fn(m, m, |k, l| u.coeff(k + l + offset))
}

/// `Γ_{kℓ} = û(k+ℓ)`.
pub fn hankel_matrix(u: &FourierState, m: usize) -> Result<OperatorMatrix> {
    check_size(u, m)?;
    Ok(OperatorMatrix { kind: OperatorKind::HankelH, entries: hankel_with_offset(u, m, 0) })
}

/// `K_u = T_z^* H_u`: entries `û(k+ℓ+1)`.
pub fn shifted_hankel_matrix(u: &FourierState, m: usize) -> Result<OperatorMatrix> {
    check_size(u, m)?;
    Ok(OperatorMatrix {
        kind: OperatorKind::ShiftedHankelK,
        entries: hankel_with_offset(u, m, 1),
    })
}

/// `T_b` from two-sided symbol coefficients: entries `b̂(k−ℓ)`.
pub fn toeplitz_matrix(b: &TwoSided, m: usize) -> OperatorMatrix {
    OperatorMatrix {
        kind: OperatorKind::Toeplitz,
        entries: CMatrix::from_fn(m, m, |k, l| b.at(k as i64 - l as i64)),
    }
}

/// `T_b` from symbol values on the plan grid.
pub fn toeplitz_from_grid(values: &[Complex64], m: usize, plan: &GridPlan) -> OperatorMatrix {
    toeplitz_matrix(&plan.from_grid(values), m)
}

/// `T_{|u|²}`.
pub fn toeplitz_abs_sq(u: &FourierState, m: usize, plan: &GridPlan) -> OperatorMatrix {
    toeplitz_matrix(&plan.abs_sq(u), m)
}

fn gram(g: &CMatrix) -> CMatrix {
    let mut out = g * g.map(|c| c.conj());
    hermitize(&mut out);
    out
}

fn hermitize(a: &mut CMatrix) {
    let n = a.nrows();
    for i in 0..n {
        a[(i, i)].im = 0.0;
        for j in i + 1..n {
            let v = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
}

/// `H_u²`, entries `Σ_j û(k+j) conj(û(ℓ+j))`.
pub fn hankel_square(u: &FourierState, m: usize) -> Result<OperatorMatrix> {
    let h = hankel_matrix(u, m)?;
    Ok(OperatorMatrix { kind: OperatorKind::HankelSquare, entries: gram(&h.entries) })
}

/// `K_u²` from the shifted Hankel matrix.
pub fn k_square(u: &FourierState, m: usize) -> Result<OperatorMatrix> {
    let k = shifted_hankel_matrix(u, m)?;
    Ok(OperatorMatrix { kind: OperatorKind::KSquare, entries: gram(&k.entries) })
}

/// `‖K² − H² + (·|u)u‖_F / ‖H²‖_F`.
pub fn rank_identity_residual(u: &FourierState, m: usize) -> Result<f64> {
    let h2 = hankel_square(u, m)?.entries;
    let k2 = k_square(u, m)?.entries;
    let v = nalgebra::DVector::from_fn(m, |k, _| u.coeff(k));
    let outer = &v * v.adjoint();
    let scale = h2.norm();
    let r = (k2 - &h2 + outer).norm();
    Ok(if scale > 0.0 { r / scale } else { r })
}

/// `B_u = i/2 H_u² − i T_{|u|²}` and `C_u = i/2 K_u² − i T_{|u|²}`.
pub fn bu_cu_matrices(
    u: &FourierState,
    plan: &GridPlan,
    m: usize,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let i = Complex64::i();
    let t = toeplitz_abs_sq(u, m, plan).entries;
    let h2 = hankel_square(u, m)?.entries;
    let k2 = k_square(u, m)?.entries;
    let b = h2 * (0.5 * i) - &t * i;
    let c = k2 * (0.5 * i) - &t * i;
    Ok((
        OperatorMatrix { kind: OperatorKind::Bu, entries: b },
        OperatorMatrix { kind: OperatorKind::Cu, entries: c },
    ))
}

/// Matrix-free `H_u(h) = Π(u·conj(h))` on the plan grid.
pub fn apply_hankel(u: &FourierState, h: &FourierState, plan: &GridPlan) -> FourierState {
    apply_with_offset(u, h, plan, 0)
}

/// Matrix-free `K_u(h) = T_z^* Π(u·conj(h))`.
pub fn apply_shifted_hankel(u: &FourierState, h: &FourierState, plan: &GridPlan) -> FourierState {
    apply_with_offset(u, h, plan, 1)
}

fn apply_with_offset(u: &FourierState, h: &FourierState, plan: &GridPlan, offset: i64) -> FourierState {
    let n = u.truncation();
    let ug = plan.to_grid(u);
    let hg = plan.to_grid(h);
    let prod: Vec<Complex64> = ug.iter().zip(&hg).map(|(a, b)| a * b.conj()).collect();
    let full = plan.from_grid(&prod);
    FourierState::new((0..n as i64).map(|k| full.at(k + offset)).collect()).expect("finite product")
}

/// Matrix of the antilinear commutator `[L, A] = L∘A − A∘L` for ℂ-linear
/// `L` and antilinear `A` with matrix `Γ`: `L Γ − Γ conj(L)`.
pub fn antilinear_commutator(l: &CMatrix, gamma: &CMatrix) -> CMatrix {
    l * gamma - gamma * l.map(|c| c.conj())
}

/// Spectral norm of a dense matrix.
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.max()
}
