//! Eigen-analysis of `H_u²` and `K_u²`: dominant levels, multiplicities,
//! eigenspace projections of `u` and `1`, level Blaschke products and ranks.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::hankel::{hankel_matrix, hankel_square, k_square, shifted_hankel_matrix, CMatrix};
use crate::poly;
use crate::state::FourierState;

/// Default relative clustering tolerance on squared eigenvalues.
pub const DEFAULT_CLUSTER_REL_TOL: f64 = 1e-9;

/// A level is dominant when `‖proj u‖ > DOMINANCE_REL_TOL · ‖u‖`; passive
/// levels sit at round-off, genuine small levels well above it.
pub const DOMINANCE_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    H,
    K,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Dominance {
    HDominant,
    KDominant,
}

/// One eigenvalue cluster of `H_u²` or `K_u²`.
#[derive(Debug, Clone)]
pub struct SpectralLevel {
    pub family: Family,
    /// `ρ` or `σ` (square root of the eigenvalue).
    pub value: f64,
    /// Dimension of the eigenspace: `ℓ_j` for H-levels, `m_k` for K-levels.
    pub multiplicity: usize,
    /// Whether `u` is not orthogonal to the eigenspace.
    pub dominant: bool,
    /// Projection of `u` (`u_j` or `u'_k`).
    pub u_proj: FourierState,
    /// Projection of `1` (`v_j` or `v'_k`).
    pub one_proj: FourierState,
}

impl SpectralLevel {
    pub fn dominance(&self) -> Option<Dominance> {
        match (self.dominant, self.family) {
            (true, Family::H) => Some(Dominance::HDominant),
            (true, Family::K) => Some(Dominance::KDominant),
            _ => None,
        }
    }

    pub fn u_norm_sq(&self) -> f64 {
        self.u_proj.l2_norm().powi(2)
    }

    pub fn one_norm_sq(&self) -> f64 {
        self.one_proj.l2_norm().powi(2)
    }
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// `Σ_H`, descending.
    pub h_levels: Vec<SpectralLevel>,
    /// `Σ_K`, descending; the last entry has value 0 when `u` meets `ker K_u`.
    pub k_levels: Vec<SpectralLevel>,
    /// Positive H-clusters orthogonal to `u`.
    pub h_passive: Vec<SpectralLevel>,
    /// Positive K-clusters orthogonal to `u`.
    pub k_passive: Vec<SpectralLevel>,
    /// Kernel cluster of `K_u²` (present whenever `m > rk K`).
    pub k_zero: Option<SpectralLevel>,
    /// Eigenvalues of `H_u²`, descending, above the cluster tolerance.
    pub h_eigenvalues: Vec<f64>,
    /// Eigenvalues of `K_u²`, descending, above the cluster tolerance.
    pub k_eigenvalues: Vec<f64>,
    /// Absolute tolerance on squared eigenvalues.
    pub cluster_tol: f64,
    pub size: usize,
}

impl SpectralDecomposition {
    pub fn rank_h(&self) -> usize {
        self.h_eigenvalues.len()
    }

    pub fn rank_k(&self) -> usize {
        self.k_eigenvalues.len()
    }

    /// `Σ_j ℓ_j` over `Σ_H`.
    pub fn dom_rank_h(&self) -> usize {
        self.h_levels.iter().map(|l| l.multiplicity).sum()
    }

    /// `rk_d(K_u) = Σ_k m_k` over positive levels of `Σ_K`.
    pub fn dom_rank_k(&self) -> usize {
        self.k_levels.iter().filter(|l| l.value > 0.0).map(|l| l.multiplicity).sum()
    }

    /// `rk K = Σ_j(ℓ_j − 1) + Σ_k m_k` and `rk H = Σ_j ℓ_j + Σ_k (m_k − 1)`,
    /// with `k` over positive K-levels.
    pub fn rank_formulas(&self) -> (usize, usize) {
        let pos_k = self.k_levels.iter().filter(|l| l.value > 0.0);
        let rk_k = self.h_levels.iter().map(|l| l.multiplicity - 1).sum::<usize>() + self.dom_rank_k();
        let rk_h = self.dom_rank_h() + pos_k.map(|l| l.multiplicity - 1).sum::<usize>();
        (rk_h, rk_k)
    }

    /// `ρ_1 > σ_1 > ρ_2 > σ_2 > …` on the dominant sets.
    pub fn is_interlaced(&self) -> bool {
        let mut seq = Vec::new();
        for j in 0..self.h_levels.len().max(self.k_levels.len()) {
            if let Some(l) = self.h_levels.get(j) {
                seq.push((Family::H, l.value));
            }
            if let Some(l) = self.k_levels.get(j) {
                seq.push((Family::K, l.value));
            }
        }
        let alternating = seq.windows(2).all(|w| w[0].0 != w[1].0 && w[0].1 > w[1].1);
        let starts_with_h = seq.first().is_none_or(|s| s.0 == Family::H);
        alternating && starts_with_h && self.h_levels.len() == self.k_levels.len()
    }

    /// K-clusters carrying a value of `ℓ_k`: dominant, passive and kernel,
    /// descending in `σ`.
    pub fn all_k_clusters(&self) -> Vec<&SpectralLevel> {
        let mut v: Vec<&SpectralLevel> = self
            .k_levels
            .iter()
            .filter(|l| l.value > 0.0)
            .chain(self.k_passive.iter())
            .collect();
        v.sort_by(|a, b| b.value.total_cmp(&a.value));
        v.extend(self.k_zero.iter());
        v
    }

    /// σ values of all positive K-clusters, descending.
    pub fn sigmas(&self) -> Vec<f64> {
        self.all_k_clusters().into_iter().map(|l| l.value).filter(|&s| s > 0.0).collect()
    }

    /// Smallest positive dominant gap `min |ρ_j − ρ_{j+1}|` relative to
    /// the cluster tolerance; crossings make this small.
    pub fn is_generic(&self) -> bool {
        let sep = 10.0 * self.cluster_tol;
        let mut sq: Vec<f64> = self
            .h_levels
            .iter()
            .chain(self.k_levels.iter())
            .map(|l| l.value * l.value)
            .collect();
        sq.sort_by(|a, b| b.total_cmp(a));
        sq.windows(2).all(|w| w[0] - w[1] > sep)
    }
}

struct Cluster {
    value_sq: f64,
    basis: CMatrix,
}

fn eigen_sorted(a: CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(a);
    let n = eig.eigenvalues.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// Groups descending eigenvalues: values within `tol` merge, gaps in
/// `(tol, 10·tol]` are ambiguous. Returns positive clusters and the kernel
/// cluster (eigenvalues `≤ tol`).
fn cluster(vals: &[f64], vecs: &CMatrix, tol: f64) -> Result<(Vec<Cluster>, Option<CMatrix>)> {
    let n = vals.len();
    let mut out = Vec::new();
    let mut start = 0;
    let zero_from = vals.iter().position(|&v| v <= tol).unwrap_or(n);
    while start < zero_from {
        let mut end = start + 1;
        while end < zero_from && vals[end - 1] - vals[end] <= tol {
            end += 1;
        }
        let next = if end < n { vals[end].max(0.0) } else { 0.0 };
        let gap = vals[end - 1] - next;
        if gap <= 10.0 * tol && end < n {
            return Err(Error::AmbiguousCluster { a: vals[end - 1], b: next });
        }
        let mean = vals[start..end].iter().sum::<f64>() / (end - start) as f64;
        out.push(Cluster { value_sq: mean, basis: vecs.columns(start, end - start).into_owned() });
        start = end;
    }
    let zero = (zero_from < n).then(|| vecs.columns(zero_from, n - zero_from).into_owned());
    Ok((out, zero))
}

fn project(basis: &CMatrix, v: &DVector<Complex64>) -> FourierState {
    let p = basis * (basis.adjoint() * v);
    FourierState::new(p.iter().copied().collect()).expect("finite projection")
}

fn make_level(family: Family, value_sq: f64, basis: &CMatrix, u: &DVector<Complex64>, e0: &DVector<Complex64>, thr: f64) -> SpectralLevel {
    let u_proj = project(basis, u);
    let one_proj = project(basis, e0);
    SpectralLevel {
        family,
        value: value_sq.max(0.0).sqrt(),
        multiplicity: basis.ncols(),
        dominant: u_proj.l2_norm() > thr,
        u_proj,
        one_proj,
    }
}

/// Smallest `m` with `|û(k)| ≤ rel_tol · max|û|` for all `k ≥ m`.
pub fn effective_size(u: &FourierState, rel_tol: f64) -> usize {
    let scale = u.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let cut = rel_tol * scale;
    u.coeffs().iter().rposition(|c| c.norm() > cut).map_or(1, |k| k + 1)
}

/// Full decomposition on `m × m` sections of `H_u²` and `K_u²`.
///
/// `cluster_rel_tol` scales the largest eigenvalue of `H_u²` to give the
/// absolute clustering tolerance; dominance requires a projection norm
/// above `DOMINANCE_REL_TOL · ‖u‖`.
pub fn decompose(u: &FourierState, m: usize, cluster_rel_tol: f64) -> Result<SpectralDecomposition> {
    let h2 = hankel_square(u, m)?.entries;
    let k2 = k_square(u, m)?.entries;
    let (hv, hvec) = eigen_sorted(h2);
    let (kv, kvec) = eigen_sorted(k2);
    let lam_max = hv.first().copied().unwrap_or(0.0).max(0.0);
    let tol = (cluster_rel_tol * lam_max).max(f64::MIN_POSITIVE);
    let thr = DOMINANCE_REL_TOL * u.resized(m).l2_norm();

    let uvec = DVector::from_fn(m, |k, _| u.coeff(k));
    let e0 = DVector::from_fn(m, |k, _| if k == 0 { Complex64::new(1.0, 0.0) } else { Complex64::default() });

    let (hc, _) = cluster(&hv, &hvec, tol)?;
    let (kc, kzero) = cluster(&kv, &kvec, tol)?;

    let mut h_levels = Vec::new();
    let mut h_passive = Vec::new();
    for c in &hc {
        let l = make_level(Family::H, c.value_sq, &c.basis, &uvec, &e0, thr);
        if l.dominant { h_levels.push(l) } else { h_passive.push(l) }
    }
    let mut k_levels = Vec::new();
    let mut k_passive = Vec::new();
    for c in &kc {
        let l = make_level(Family::K, c.value_sq, &c.basis, &uvec, &e0, thr);
        if l.dominant { k_levels.push(l) } else { k_passive.push(l) }
    }
    let k_zero = kzero.map(|b| {
        let mut l = make_level(Family::K, 0.0, &b, &uvec, &e0, thr);
        l.value = 0.0;
        l
    });
    if let Some(z) = k_zero.as_ref().filter(|z| z.dominant) {
        k_levels.push(z.clone());
    }

    Ok(SpectralDecomposition {
        h_levels,
        k_levels,
        h_passive,
        k_passive,
        k_zero,
        h_eigenvalues: hv.into_iter().filter(|&v| v > tol).collect(),
        k_eigenvalues: kv.into_iter().filter(|&v| v > tol).collect(),
        cluster_tol: tol,
        size: m,
    })
}

/// Residuals of the closed-form projection norms, one per dominant level.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionNormCheck {
    pub family: Family,
    pub value: f64,
    pub measured: f64,
    pub formula: f64,
}

impl ProjectionNormCheck {
    pub fn residual(&self) -> f64 {
        (self.measured - self.formula).abs()
    }
}

/// `‖u_j‖² = Π_ℓ(ρ_j²−σ_ℓ²)/Π_{ℓ≠j}(ρ_j²−ρ_ℓ²)` and
/// `‖u'_k‖² = Π_ℓ(ρ_ℓ²−σ_k²)/Π_{ℓ≠k}(σ_ℓ²−σ_k²)` over the dominant sets.
///
/// Returns an empty list when two dominant values are within
/// `10·cluster_tol` (the formulas need a generic spectrum).
pub fn verify_projection_norms(dec: &SpectralDecomposition) -> Vec<ProjectionNormCheck> {
    if !dec.is_generic() {
        return Vec::new();
    }
    let rho2: Vec<f64> = dec.h_levels.iter().map(|l| l.value * l.value).collect();
    let sig2: Vec<f64> = dec.k_levels.iter().map(|l| l.value * l.value).collect();
    let mut out = Vec::new();
    for (j, l) in dec.h_levels.iter().enumerate() {
        let num: f64 = sig2.iter().map(|s| rho2[j] - s).product();
        let den: f64 = rho2.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, r)| rho2[j] - r).product();
        out.push(ProjectionNormCheck { family: Family::H, value: l.value, measured: l.u_norm_sq(), formula: num / den });
    }
    for (k, l) in dec.k_levels.iter().enumerate() {
        let num: f64 = rho2.iter().map(|r| r - sig2[k]).product();
        let den: f64 = sig2.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, s)| s - sig2[k]).product();
        out.push(ProjectionNormCheck { family: Family::K, value: l.value, measured: l.u_norm_sq(), formula: num / den });
    }
    out
}

/// `|‖v_j‖² − ‖u_j‖²/ρ_j²|` per H-dominant level.
pub fn verify_v_norm(dec: &SpectralDecomposition) -> Vec<f64> {
    dec.h_levels
        .iter()
        .map(|l| (l.one_norm_sq() - l.u_norm_sq() / (l.value * l.value)).abs())
        .collect()
}

/// `|Σ_ρ ‖u_ρ‖²/(ρ²−σ²) − 1|` for each `σ ∈ Σ_K`.
pub fn sum_rule_residuals(dec: &SpectralDecomposition) -> Vec<f64> {
    dec.k_levels
        .iter()
        .map(|k| {
            let s2 = k.value * k.value;
            let sum: f64 = dec.h_levels.iter().map(|h| h.u_norm_sq() / (h.value * h.value - s2)).sum();
            (sum - 1.0).abs()
        })
        .collect()
}

/// `(‖Σ_j u_j − u‖, ‖Σ_k u'_k − u‖)`.
pub fn reconstruction_residuals(u: &FourierState, dec: &SpectralDecomposition) -> (f64, f64) {
    let m = dec.size;
    let sum = |levels: &[SpectralLevel]| {
        levels.iter().fold(FourierState::zeros(m), |acc, l| acc.axpy(Complex64::new(1.0, 0.0), &l.u_proj))
    };
    let target = u.resized(m);
    (sum(&dec.h_levels).l2_distance(&target), sum(&dec.k_levels).l2_distance(&target))
}

/// Finds the level of `family` whose value is nearest `value`, within
/// `tol`.
pub fn find_level(dec: &SpectralDecomposition, family: Family, value: f64, tol: f64) -> Result<&SpectralLevel> {
    let pool: Vec<&SpectralLevel> = match family {
        Family::H => dec.h_levels.iter().chain(dec.h_passive.iter()).collect(),
        Family::K => dec.k_levels.iter().chain(dec.k_passive.iter()).collect(),
    };
    pool.into_iter()
        .filter(|l| (l.value - value).abs() <= tol)
        .min_by(|a, b| (a.value - value).abs().total_cmp(&(b.value - value).abs()))
        .ok_or(Error::LevelNotFound(value))
}

/// Tolerance on the fitted Blaschke product (unimodularity and grid match).
pub const BLASCHKE_FIT_TOL: f64 = 1e-8;

/// Blaschke product of a dominant level: `ρ u_ρ = Ψ H_u(u_ρ)` for
/// H-levels, `K_u(u'_σ) = σ Ψ u'_σ` for K-levels.
///
/// `Ψ = Num/Den` is fitted by linear least squares on the power-series
/// identity `Num·den − Den·num = 0` with `Den(0) = 1` and degree `ℓ−1`
/// (resp. `m−1`); zeros come from the companion matrix of `Num`.
pub fn level_blaschke(u: &FourierState, level: &SpectralLevel) -> Result<BlaschkeProduct> {
    let m = level.u_proj.truncation();
    if !level.dominant {
        return Err(Error::InvalidInput(format!("level {} is not dominant", level.value)));
    }
    let (num, den, d): (Vec<Complex64>, Vec<Complex64>, usize) = match level.family {
        Family::H => {
            let g = hankel_matrix(u, m)?;
            let hu = g.apply(level.u_proj.coeffs());
            let num = level.u_proj.coeffs().iter().map(|c| c * level.value).collect();
            (num, hu, level.multiplicity - 1)
        }
        Family::K => {
            if level.value == 0.0 {
                return Err(Error::InvalidInput("kernel level has no Blaschke product".into()));
            }
            let g = shifted_hankel_matrix(u, m)?;
            let ku = g.apply(level.u_proj.coeffs());
            let den = level.u_proj.coeffs().iter().map(|c| c * level.value).collect();
            (ku, den, level.multiplicity - 1)
        }
    };
    fit_blaschke(&num, &den, d)
}

/// Fits `Ψ = num/den` (power series of length `m`) by a degree-`d` Blaschke
/// product.
pub fn fit_blaschke(num: &[Complex64], den: &[Complex64], d: usize) -> Result<BlaschkeProduct> {
    let m = num.len();
    let mismatch = |reason: String| Error::DegreeMismatch { expected: d, reason };
    if m < 2 * d + 1 {
        return Err(mismatch(format!("only {m} coefficients")));
    }
    // unknowns: Num_0..Num_d, Den_1..Den_d
    let cols = 2 * d + 1;
    let a = DMatrix::<Complex64>::from_fn(m, cols, |k, j| {
        if j <= d {
            if k >= j { den[k - j] } else { Complex64::default() }
        } else {
            let s = j - d;
            if k >= s { -num[k - s] } else { Complex64::default() }
        }
    });
    let b = DVector::from_column_slice(num);
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let x = svd
        .solve(&b, 1e-13 * smax)
        .map_err(|e| mismatch(format!("least squares failed: {e}")))?;
    let numer: Vec<Complex64> = x.iter().take(d + 1).copied().collect();
    let mut denom = vec![Complex64::new(1.0, 0.0)];
    denom.extend(x.iter().skip(d + 1).copied());

    let lead = numer[d];
    if (lead.norm() - 1.0).abs() > 1e-6 {
        return Err(mismatch(format!("leading coefficient modulus {:.3e}", lead.norm())));
    }
    let monic: Vec<Complex64> = numer.iter().map(|c| c / lead).collect();
    let zeros = poly::roots(&monic)?;
    if let Some(p) = zeros.iter().find(|p| p.norm() >= 1.0) {
        return Err(mismatch(format!("zero {p} outside the disc")));
    }
    let psi = BlaschkeProduct::new(-lead.arg(), zeros)?;

    let defect = psi.unimodularity_defect(64);
    if defect > BLASCHKE_FIT_TOL {
        return Err(mismatch(format!("unimodularity defect {defect:.3e}")));
    }
    let ratio = blaschke_match(&psi, num, den);
    if ratio > BLASCHKE_FIT_TOL {
        return Err(mismatch(format!("grid mismatch {ratio:.3e}")));
    }
    Ok(psi)
}

/// Largest `|Ψ(z) − num(z)/den(z)|` over 64 circle points where `den` is
/// not negligible.
pub fn blaschke_match(psi: &BlaschkeProduct, num: &[Complex64], den: &[Complex64]) -> f64 {
    let pts: Vec<Complex64> = (0..64)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / 64.0))
        .collect();
    let dv: Vec<Complex64> = pts.iter().map(|&z| poly::eval(den, z)).collect();
    let dmax = dv.iter().map(|c| c.norm()).fold(0.0, f64::max);
    pts.iter()
        .zip(&dv)
        .filter(|(_, d)| d.norm() > 1e-6 * dmax)
        .map(|(&z, &d)| (psi.eval(z) - poly::eval(num, z) / d).norm())
        .fold(0.0, f64::max)
}

/// Numerical ranks of the Hankel matrices and the dominant ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ranks {
    pub rank_h: usize,
    pub rank_k: usize,
    pub dom_rank_h: usize,
    pub dom_rank_k: usize,
}

fn numerical_rank(g: CMatrix, rel_tol: f64) -> Result<usize> {
    let sv = g.svd(false, false).singular_values;
    let smax = sv.max();
    if smax == 0.0 {
        return Ok(0);
    }
    let tol = rel_tol * smax;
    if let Some(&s) = sv.iter().find(|&&s| s > tol / 10.0 && s < tol * 10.0) {
        return Err(Error::RankThreshold { tol, value: s });
    }
    Ok(sv.iter().filter(|&&s| s > tol).count())
}

/// Ranks at singular-value threshold `rel_tol · s_max`; the decomposition's
/// rank formulas must agree with the numerical ranks.
pub fn ranks(u: &FourierState, rel_tol: f64) -> Result<Ranks> {
    let m = u.truncation();
    let rank_h = numerical_rank(hankel_matrix(u, m)?.entries, rel_tol)?;
    let rank_k = numerical_rank(shifted_hankel_matrix(u, m)?.entries, rel_tol)?;
    let dec = decompose(u, m, DEFAULT_CLUSTER_REL_TOL)?;
    let (fh, fk) = dec.rank_formulas();
    if fh != rank_h || fk != rank_k {
        return Err(Error::AssemblyCheck(format!(
            "rank formulas give (H {fh}, K {fk}), singular values give (H {rank_h}, K {rank_k})"
        )));
    }
    Ok(Ranks { rank_h, rank_k, dom_rank_h: dec.dom_rank_h(), dom_rank_k: dec.dom_rank_k() })
}

/// Largest pole modulus `|p|` (pole at `1/p`) of the rational function
/// underlying `u`.
///
/// The denominator comes from the null vector of the coefficient recurrence
/// `Σ_j B_j û(k−j) = 0`, `k > r`, with `r` the rank of a small shifted
/// Hankel section. When that system is ill-conditioned, the geometric decay
/// rate of the coefficients is used instead.
pub fn pole_radius(u: &FourierState) -> f64 {
    pole_radius_recurrence(u).unwrap_or_else(|| pole_radius_decay(u))
}

fn pole_radius_recurrence(u: &FourierState) -> Option<f64> {
    let n = u.truncation();
    let sec = (n / 2).min(32);
    if sec < 2 {
        return None;
    }
    let kmat = CMatrix::from_fn(sec, sec, |k, l| u.coeff(k + l + 1));
    let sv = kmat.svd(false, false).singular_values;
    let smax = sv.max();
    if smax == 0.0 {
        return Some(0.0);
    }
    let r = sv.iter().filter(|&&s| s > 1e-10 * smax).count();
    if r >= sec - 1 || 2 * r + 2 > n {
        return None;
    }
    let rows = (n - r - 1).min(4 * (r + 1)).max(r + 1);
    let a = CMatrix::from_fn(rows, r + 1, |i, j| u.coeff(r + 1 + i - j));
    let svd = a.svd(false, true);
    let vt = svd.v_t?;
    let sv = &svd.singular_values;
    let (imin, _) = sv.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1))?;
    let second = sv.iter().enumerate().filter(|&(i, _)| i != imin).map(|(_, &s)| s).fold(f64::INFINITY, f64::min);
    if r > 0 && sv[imin] > 1e-6 * second {
        return None;
    }
    let b: Vec<Complex64> = vt.row(imin).iter().map(|c| c.conj()).collect();
    let roots = poly::roots(&b).ok()?;
    Some(roots.iter().map(|z| 1.0 / z.norm()).fold(0.0, f64::max))
}

fn pole_radius_decay(u: &FourierState) -> f64 {
    let scale = u.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = u
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| c.norm() > 1e-13 * scale)
        .map(|(k, c)| (k as f64, c.norm().ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxy / sxx).exp().min(1.0)
}
