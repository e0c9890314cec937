//! Conserved quantities: energy, mass, momentum, the hierarchy `L_n`, the
//! generating functions `J_x, Z_x, F_x, E_x, L_x`, the per-level `ℓ_k`, and
//! a finite-difference Poisson bracket.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridPlan;
use crate::hankel::{apply_shifted_hankel, hankel_square, k_square, CMatrix};
use crate::spectral::SpectralDecomposition;
use crate::state::{inner_product, FourierState};

/// `E_α(u) = ¼ ∫|u|⁴ + α/2 |(u|1)|²`.
pub fn energy(u: &FourierState, alpha: f64, plan: &GridPlan) -> f64 {
    0.25 * plan.l4_norm_fourth(u) + 0.5 * alpha * u.coeff(0).norm_sqr()
}

/// `Q(u) = Σ |û(k)|²`.
pub fn mass(u: &FourierState) -> f64 {
    u.coeffs().iter().map(|c| c.norm_sqr()).sum()
}

/// `M(u) = Σ k |û(k)|²`.
pub fn momentum(u: &FourierState) -> f64 {
    u.coeffs().iter().enumerate().map(|(k, c)| k as f64 * c.norm_sqr()).sum()
}

/// `K_u² h` without forming a matrix.
pub fn apply_k_square(u: &FourierState, h: &FourierState, plan: &GridPlan) -> FourierState {
    apply_shifted_hankel(u, &apply_shifted_hankel(u, h, plan), plan)
}

/// `L_n = (K_u^{2n} u | u) − α (K_u^{2n} 1 | 1)` for `n = 0..=n_max`.
pub fn hierarchy_l(u: &FourierState, alpha: f64, n_max: usize, plan: &GridPlan) -> Vec<f64> {
    let one = FourierState::monomial(u.truncation(), 0, Complex64::new(1.0, 0.0));
    let mut a = u.clone();
    let mut b = one.clone();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            a = apply_k_square(u, &a, plan);
            b = apply_k_square(u, &b, plan);
        }
        out.push(inner_product(&a, u).re - alpha * b.coeff(0).re);
    }
    out
}

/// Same hierarchy from the dense `m × m` matrix `K_u²`.
pub fn hierarchy_l_dense(u: &FourierState, alpha: f64, n_max: usize, m: usize) -> Result<Vec<f64>> {
    let k2 = k_square(u, m)?.entries;
    let uv = DVector::from_fn(m, |k, _| u.coeff(k));
    let mut a = uv.clone();
    let mut b = DVector::from_fn(m, |k, _| if k == 0 { Complex64::new(1.0, 0.0) } else { Complex64::default() });
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            a = &k2 * a;
            b = &k2 * b;
        }
        out.push(uv.dotc(&a).re - alpha * b[0].re);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratingValues {
    pub x: f64,
    pub j: f64,
    pub z: Complex64,
    pub f: f64,
    pub e: f64,
    pub l: f64,
}

impl GeneratingValues {
    /// Residuals of `F = (J−1)/(xJ)` and `E = J − x|Z|²/J`, written without
    /// division and scaled by the magnitude of the terms.
    pub fn relation_residuals(&self) -> (f64, f64) {
        let x = self.x;
        let r1 = (x * self.j * self.f - (self.j - 1.0)).abs() / (1.0 + self.j.abs()).max((x * self.j * self.f).abs());
        let r2 = (self.e * self.j - self.j * self.j + x * self.z.norm_sqr()).abs()
            / (1.0 + self.j * self.j).max((self.e * self.j).abs());
        (r1, r2)
    }
}

/// Relation residual bound checked after every evaluation.
pub const RELATION_TOL: f64 = 1e-10;

fn resonance_check(a: &CMatrix, x: f64) -> Result<()> {
    if x == 0.0 {
        return Ok(());
    }
    let vals = SymmetricEigen::new(a.clone()).eigenvalues;
    let lam_max = vals.iter().fold(0.0f64, |m, &v| m.max(v.abs())).max(1.0);
    let tol = 10.0 * 1e-9 * lam_max;
    if let Some(&l) = vals.iter().find(|&&l| (1.0 / x - l).abs() <= tol) {
        return Err(Error::NearResonance { inv_x: 1.0 / x, eigenvalue: l });
    }
    Ok(())
}

fn resolvent_solve(a: &CMatrix, x: f64, rhs: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    let m = a.nrows();
    let sys = DMatrix::<Complex64>::identity(m, m) - a * Complex64::new(x, 0.0);
    sys.lu()
        .solve(rhs)
        .ok_or_else(|| Error::NearResonance { inv_x: 1.0 / x, eigenvalue: f64::NAN })
}

/// `J_x = ((1−xH²)⁻¹1|1)`, `Z_x = (1|(1−xH²)⁻¹u)`, `F_x = ((1−xK²)⁻¹u|u)`,
/// `E_x = ((1−xK²)⁻¹1|1)`, `L_x = F_x − α E_x` on `m × m` sections.
pub fn generating_values(u: &FourierState, alpha: f64, x: f64, m: usize) -> Result<GeneratingValues> {
    let h2 = hankel_square(u, m)?.entries;
    let k2 = k_square(u, m)?.entries;
    resonance_check(&h2, x)?;
    resonance_check(&k2, x)?;
    let uv = DVector::from_fn(m, |k, _| u.coeff(k));
    let e0 = DVector::from_fn(m, |k, _| if k == 0 { Complex64::new(1.0, 0.0) } else { Complex64::default() });

    let j = resolvent_solve(&h2, x, &e0)?[0].re;
    let z = resolvent_solve(&h2, x, &uv)?[0].conj();
    let f = uv.dotc(&resolvent_solve(&k2, x, &uv)?).re;
    let e = resolvent_solve(&k2, x, &e0)?[0].re;
    let g = GeneratingValues { x, j, z, f, e, l: f - alpha * e };

    let (r1, r2) = g.relation_residuals();
    if r1 > RELATION_TOL || r2 > RELATION_TOL {
        return Err(Error::AssemblyCheck(format!(
            "generating-function relations off by {r1:.3e}, {r2:.3e} at x = {x}"
        )));
    }
    Ok(g)
}

/// `Π_k(1 − xσ_k²) / Π_j(1 − xρ_j²)` over the dominant sets.
pub fn j_product_formula(dec: &SpectralDecomposition, x: f64) -> f64 {
    let num: f64 = dec.k_levels.iter().map(|l| 1.0 - x * l.value * l.value).product();
    let den: f64 = dec.h_levels.iter().map(|l| 1.0 - x * l.value * l.value).product();
    num / den
}

/// `ℓ_k = ‖u'_k‖² − α‖v'_k‖²` for one K-cluster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelInvariant {
    pub sigma: f64,
    pub multiplicity: usize,
    pub dominant: bool,
    pub ell: f64,
}

/// `ℓ_k` for every K-cluster, dominant or not, including the kernel.
pub fn ell_k(dec: &SpectralDecomposition, alpha: f64) -> Vec<LevelInvariant> {
    dec.all_k_clusters()
        .into_iter()
        .map(|l| LevelInvariant {
            sigma: l.value,
            multiplicity: l.multiplicity,
            dominant: l.dominant,
            ell: l.u_norm_sq() - alpha * l.one_norm_sq(),
        })
        .collect()
}

/// `Σ_k σ_k^{2n} ℓ_k` (the kernel contributes only at `n = 0`).
pub fn moment(levels: &[LevelInvariant], n: u32) -> f64 {
    levels
        .iter()
        .map(|l| if n == 0 { l.ell } else { l.sigma.powi(2 * n as i32) * l.ell })
        .sum()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvariantSet {
    pub alpha: f64,
    pub energy: f64,
    pub mass: f64,
    pub momentum: f64,
    /// `L_0..L_n`.
    pub hierarchy: Vec<f64>,
    pub per_level: Vec<LevelInvariant>,
}

impl InvariantSet {
    pub fn compute(
        u: &FourierState,
        alpha: f64,
        plan: &GridPlan,
        n_max: usize,
        dec: Option<&SpectralDecomposition>,
    ) -> Self {
        Self {
            alpha,
            energy: energy(u, alpha, plan),
            mass: mass(u),
            momentum: momentum(u),
            hierarchy: hierarchy_l(u, alpha, n_max, plan),
            per_level: dec.map(|d| ell_k(d, alpha)).unwrap_or_default(),
        }
    }

    /// `(name, value)` pairs in audit order.
    pub fn named(&self) -> Vec<(String, f64)> {
        let mut v = vec![
            ("E_alpha".to_string(), self.energy),
            ("Q".to_string(), self.mass),
            ("M".to_string(), self.momentum),
        ];
        v.extend(self.hierarchy.iter().enumerate().map(|(n, &l)| (format!("L{n}"), l)));
        v
    }
}

/// Functionals accepted by [`poisson_bracket`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Functional {
    Lx(f64),
    Energy,
    Mass,
    Momentum,
}

/// Evaluates a functional; `m` is the section size for `L_x`.
pub fn evaluate(f: Functional, u: &FourierState, alpha: f64, plan: &GridPlan, m: usize) -> Result<f64> {
    Ok(match f {
        Functional::Lx(x) => lx_unchecked(u, alpha, x, m)?,
        Functional::Energy => energy(u, alpha, plan),
        Functional::Mass => mass(u),
        Functional::Momentum => momentum(u),
    })
}

fn lx_unchecked(u: &FourierState, alpha: f64, x: f64, m: usize) -> Result<f64> {
    let k2 = k_square(u, m)?.entries;
    let uv = DVector::from_fn(m, |k, _| u.coeff(k));
    let e0 = DVector::from_fn(m, |k, _| if k == 0 { Complex64::new(1.0, 0.0) } else { Complex64::default() });
    let f = uv.dotc(&resolvent_solve(&k2, x, &uv)?).re;
    let e = resolvent_solve(&k2, x, &e0)?[0].re;
    Ok(f - alpha * e)
}

/// Gradient `g = ∂_{Re} F + i ∂_{Im} F` by central differences with step `h`
/// on each real coordinate.
pub fn gradient(
    f: Functional,
    u: &FourierState,
    alpha: f64,
    plan: &GridPlan,
    m: usize,
    h: f64,
) -> Result<Vec<Complex64>> {
    let n = u.truncation();
    let mut g = vec![Complex64::default(); n];
    let mut w = u.clone();
    for k in 0..n {
        for (dir, slot) in [(Complex64::new(h, 0.0), 0), (Complex64::new(0.0, h), 1)] {
            let base = w.coeffs()[k];
            w.coeffs_mut()[k] = base + dir;
            let fp = evaluate(f, &w, alpha, plan, m)?;
            w.coeffs_mut()[k] = base - dir;
            let fm = evaluate(f, &w, alpha, plan, m)?;
            w.coeffs_mut()[k] = base;
            let d = (fp - fm) / (2.0 * h);
            if slot == 0 { g[k].re = d } else { g[k].im = d }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BracketValue {
    /// `{F, G} = ω(X_F, X_G) = ¼ Im(g_F | g_G)`.
    pub bracket: f64,
    /// `|{F, G}| / (‖g_F‖ ‖g_G‖)`.
    pub normalized: f64,
    /// Relative change of the gradients between steps `h` and `2h`.
    pub jitter: f64,
}

impl BracketValue {
    pub fn step_too_small(&self) -> bool {
        self.jitter > 0.1
    }
}

/// Default finite-difference step `1e−5 (1 + ‖u‖)`.
pub fn default_fd_step(u: &FourierState) -> f64 {
    1e-5 * (1.0 + u.l2_norm())
}

/// Poisson bracket for `ω(u, v) = 4 Im(u|v)`.
///
/// `dF(u)·h = Re(g_F | h) = ω(h, X_F)` gives `X_F = −(i/4) g_F` and
/// `{F, G} = ω(X_F, X_G) = ¼ Im(g_F | g_G)`.
pub fn poisson_bracket(
    f: Functional,
    g: Functional,
    u: &FourierState,
    alpha: f64,
    plan: &GridPlan,
    m: usize,
    h: f64,
) -> Result<BracketValue> {
    let gf = gradient(f, u, alpha, plan, m, h)?;
    let gg = gradient(g, u, alpha, plan, m, h)?;
    let gf2 = gradient(f, u, alpha, plan, m, 2.0 * h)?;
    let norm = |v: &[Complex64]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let dot: Complex64 = gf.iter().zip(&gg).map(|(a, b)| a * b.conj()).sum();
    let bracket = 0.25 * dot.im;
    let scale = norm(&gf) * norm(&gg);
    let diff: Vec<Complex64> = gf.iter().zip(&gf2).map(|(a, b)| a - b).collect();
    Ok(BracketValue {
        bracket,
        normalized: if scale > 0.0 { bracket.abs() / scale } else { 0.0 },
        jitter: if norm(&gf) > 0.0 { norm(&diff) / norm(&gf) } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rational_to_fourier, RationalState};
    use crate::spectral::{decompose, DEFAULT_CLUSTER_REL_TOL};

    fn blaschke_half() -> FourierState {
        rational_to_fourier(&RationalState::from_real(&[-0.5, 1.0], &[1.0, -0.5]).unwrap(), 64, 1e-12).unwrap()
    }

    #[test]
    fn energy_examples() {
        let plan = GridPlan::for_truncation(8);
        assert!((energy(&FourierState::from_real(8, &[1.0, 1.0]), 1.0, &plan) - 2.0).abs() < 1e-13);
        assert_eq!(energy(&FourierState::zeros(8), 1.0, &plan), 0.0);
        let u = blaschke_half();
        let plan = GridPlan::for_truncation(64);
        assert!((energy(&u, 1.0, &plan) - 0.375).abs() < 1e-13);
    }

    #[test]
    fn mass_and_momentum() {
        let u = FourierState::from_real(8, &[1.0, 1.0]);
        assert_eq!((mass(&u), momentum(&u)), (2.0, 1.0));
        assert!((mass(&blaschke_half()) - 1.0).abs() < 1e-14);
        assert_eq!(mass(&FourierState::zeros(3)), 0.0);
    }

    #[test]
    fn hierarchy_examples() {
        let u = FourierState::from_real(16, &[1.0, 1.0]);
        let plan = GridPlan::for_truncation(16);
        let l = hierarchy_l(&u, 1.0, 3, &plan);
        assert!((l[0] - 1.0).abs() < 1e-14);
        assert!(l[1].abs() < 1e-14);
        let dense = hierarchy_l_dense(&u, 1.0, 3, 16).unwrap();
        for (a, b) in l.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-13);
        }
        let b = blaschke_half();
        let l = hierarchy_l(&b, 1.0, 1, &GridPlan::for_truncation(64));
        assert!((l[1] + 0.75).abs() < 1e-13);
    }

    #[test]
    fn generating_examples() {
        let z = FourierState::zeros(8);
        let g = generating_values(&z, 0.7, 0.3, 8).unwrap();
        assert_eq!((g.j, g.e, g.f, g.l), (1.0, 1.0, 0.0, -0.7));
        let u = FourierState::from_real(8, &[1.0, 1.0]);
        let g = generating_values(&u, 1.0, 0.0, 8).unwrap();
        assert_eq!((g.j, g.f, g.e, g.l), (1.0, 2.0, 1.0, 1.0));
        let g = generating_values(&u, 1.0, 0.1, 8).unwrap();
        let dec = decompose(&u, 8, DEFAULT_CLUSTER_REL_TOL).unwrap();
        assert!((g.j - j_product_formula(&dec, 0.1)).abs() < 1e-12);
        let r2 = (3.0 + 5f64.sqrt()) / 2.0;
        let want = 0.9 / ((1.0 - 0.1 * r2) * (1.0 - 0.1 * (3.0 - r2)));
        assert!((g.j - want).abs() < 1e-12);
    }

    #[test]
    fn resonance_rejected() {
        let u = FourierState::from_real(8, &[0.0, 1.0]);
        assert!(matches!(generating_values(&u, 1.0, 1.0, 8), Err(Error::NearResonance { .. })));
    }

    #[test]
    fn ell_examples() {
        let u = FourierState::from_real(16, &[1.0, 1.0]);
        let dec = decompose(&u, 16, DEFAULT_CLUSTER_REL_TOL).unwrap();
        let ell = ell_k(&dec, 1.0);
        assert!((ell[0].sigma - 1.0).abs() < 1e-14 && ell[0].ell.abs() < 1e-13);
        let plan = GridPlan::for_truncation(16);
        let l = hierarchy_l(&u, 1.0, 3, &plan);
        for n in 0..=3 {
            assert!((moment(&ell, n) - l[n as usize]).abs() < 1e-12);
        }

        let b = blaschke_half();
        let dec = decompose(&b, 64, DEFAULT_CLUSTER_REL_TOL).unwrap();
        let ell = ell_k(&dec, 1.0);
        assert!((ell[0].sigma - 1.0).abs() < 1e-12);
        assert!(!ell[0].dominant);
        assert!((ell[0].ell + 0.75).abs() < 1e-12);
        assert!(ell_k(&dec, 0.0).iter().all(|l| l.ell >= 0.0));
    }

    #[test]
    fn bracket_of_mass_with_energy_vanishes() {
        let u = FourierState::new(vec![
            Complex64::new(0.8, 0.1),
            Complex64::new(0.3, -0.4),
            Complex64::new(0.05, 0.02),
            Complex64::default(),
        ])
        .unwrap();
        let plan = GridPlan::for_truncation(4);
        let h = default_fd_step(&u);
        let b = poisson_bracket(Functional::Mass, Functional::Energy, &u, 1.0, &plan, 4, h).unwrap();
        assert!(b.normalized < 1e-6, "{b:?}");
        let b = poisson_bracket(Functional::Lx(0.1), Functional::Lx(0.1), &u, 1.0, &plan, 4, h).unwrap();
        assert!(b.normalized < 1e-9);
        let b = poisson_bracket(Functional::Momentum, Functional::Mass, &u, 1.0, &plan, 4, h).unwrap();
        assert!(b.normalized < 1e-6);
    }
}
