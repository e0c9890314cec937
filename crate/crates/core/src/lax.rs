//! Finite-difference residual tests of the Lax identities and of the
//! projection evolution system, and tracking of level Blaschke zeros.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::grid::GridPlan;
use crate::hankel::{
    antilinear_commutator, bu_cu_matrices, hankel_matrix, operator_norm, shifted_hankel_matrix, toeplitz_abs_sq,
    CMatrix,
};
use crate::integrator::{fixed_step, TrajectoryRecord};
use crate::spectral::{decompose, effective_size, find_level, level_blaschke, Family, DEFAULT_CLUSTER_REL_TOL};
use crate::state::FourierState;

/// Default finite-difference half-width.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// `u(t−δt), u(t), u(t+δt)` from the trajectory, the neighbours by one
/// fixed fifth-order step each way.
fn triple(traj: &TrajectoryRecord, t: f64, dt: f64) -> Result<(FourierState, FourierState, FourierState, GridPlan)> {
    if !(dt > 0.0 && dt <= 1e-2) {
        return Err(Error::InvalidInput(format!("finite-difference step {dt} outside (0, 1e-2]")));
    }
    let plan = traj.config.validate()?;
    let u = traj.state_at(t)?;
    let a = traj.config.alpha;
    let up = fixed_step(&u, a, &plan, dt);
    let um = fixed_step(&u, a, &plan, -dt);
    Ok((um, u, up, plan))
}

fn central(minus: &CMatrix, plus: &CMatrix, dt: f64) -> CMatrix {
    (plus - minus) / Complex64::from(2.0 * dt)
}

fn relative(diff: &CMatrix, scale: f64) -> f64 {
    let r = operator_norm(diff);
    if scale > 0.0 {
        r / scale
    } else {
        r
    }
}

/// `‖dK/dt − [C_u, K_u]‖ / ‖K_u‖` at time `t`, central differences, `m × m`
/// sections.
pub fn lax_residual_k(traj: &TrajectoryRecord, t: f64, dt: f64, m: usize) -> Result<f64> {
    let (um, u, up, plan) = triple(traj, t, dt)?;
    let k = shifted_hankel_matrix(&u, m)?.entries;
    let dk = central(&shifted_hankel_matrix(&um, m)?.entries, &shifted_hankel_matrix(&up, m)?.entries, dt);
    let (_, c) = bu_cu_matrices(&u, &plan, m)?;
    let rhs = antilinear_commutator(&c.entries, &k);
    Ok(relative(&(dk - rhs), operator_norm(&k)))
}

/// `‖dH/dt − [B_u, H_u] + iα(u|1)H₁‖ / ‖H_u‖`; with `with_source = false`
/// the `H₁` term is dropped.
pub fn hu_evolution_residual(traj: &TrajectoryRecord, t: f64, dt: f64, m: usize, with_source: bool) -> Result<f64> {
    let (um, u, up, plan) = triple(traj, t, dt)?;
    let h = hankel_matrix(&u, m)?.entries;
    let dh = central(&hankel_matrix(&um, m)?.entries, &hankel_matrix(&up, m)?.entries, dt);
    let (b, _) = bu_cu_matrices(&u, &plan, m)?;
    let mut rhs = antilinear_commutator(&b.entries, &h);
    if with_source {
        rhs[(0, 0)] -= Complex64::i() * traj.config.alpha * u.coeff(0);
    }
    Ok(relative(&(dh - rhs), operator_norm(&h)))
}

/// Minimum distance from `σ` to the H-singular values at which the
/// projection evolution is refused.
pub const CROSSING_PROXIMITY_TOL: f64 = 1e-3;

fn k_projection(u: &FourierState, sigma: f64, m: usize) -> Result<FourierState> {
    let dec = decompose(u, m, DEFAULT_CLUSTER_REL_TOL)?;
    let gap = dec
        .h_eigenvalues
        .iter()
        .map(|l| (l.sqrt() - sigma).abs())
        .fold(f64::INFINITY, f64::min);
    if gap < CROSSING_PROXIMITY_TOL {
        return Err(Error::CrossingProximity { sigma, gap });
    }
    let level = find_level(&dec, Family::K, sigma, 1e-6 * sigma.max(1.0))?;
    if level.multiplicity != 1 || !level.dominant {
        return Err(Error::InvalidInput(format!(
            "K-level {sigma} must be simple and dominant (multiplicity {}, dominant {})",
            level.multiplicity, level.dominant
        )));
    }
    Ok(level.u_proj.clone())
}

/// Relative residual of
/// `du'_k/dt = −i T_{|u|²} u'_k − iα (u|1) ((1|u'_k)/(u'_k|u'_k)) u'_k`.
pub fn projection_evolution_residual(traj: &TrajectoryRecord, sigma: f64, t: f64, dt: f64) -> Result<f64> {
    let (um, u, up, plan) = triple(traj, t, dt)?;
    let m = u.truncation();
    let p = k_projection(&u, sigma, m)?;
    let pm = k_projection(&um, sigma, m)?;
    let pp = k_projection(&up, sigma, m)?;
    let i = Complex64::i();
    let tu = toeplitz_abs_sq(&u, m, &plan).apply(p.coeffs());
    let nrm = p.l2_norm().powi(2);
    let one_dot = p.coeff(0).conj();
    let src = i * traj.config.alpha * u.coeff(0) * one_dot / nrm;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..m {
        let rhs = -i * tu[k] - src * p.coeff(k);
        let fd = (pp.coeff(k) - pm.coeff(k)) / (2.0 * dt);
        num += (fd - rhs).norm_sqr();
        den += rhs.norm_sqr();
    }
    Ok(if den > 0.0 { (num / den).sqrt() } else { num.sqrt() })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub sigma: f64,
    pub times: Vec<f64>,
    /// Zeros per sample, in the order fixed by the first sample.
    pub zeros: Vec<Vec<Complex64>>,
    /// Wrapped angle `ψ_k(t)`.
    pub angles: Vec<f64>,
    /// `max_t |p_j(t) − p_j(t₀)|` per zero.
    pub max_drift: Vec<f64>,
}

impl OrbitTrace {
    pub fn worst_drift(&self) -> f64 {
        self.max_drift.iter().copied().fold(0.0, f64::max)
    }
}

fn level_product(u: &FourierState, sigma: f64) -> Result<BlaschkeProduct> {
    let m = effective_size(u, 1e-15).clamp(2, u.truncation());
    let dec = decompose(u, m, DEFAULT_CLUSTER_REL_TOL)?;
    let level = find_level(&dec, Family::K, sigma, 1e-6 * sigma.max(1.0))?;
    level_blaschke(u, level)
}

/// Zeros of the Blaschke product of the K-level `σ` along the trajectory,
/// matched between samples by nearest neighbour. Two zeros closer than
/// `match_tol`, or two zeros claiming the same successor, abort the trace.
pub fn blaschke_orbit_trace(traj: &TrajectoryRecord, sigma: f64, match_tol: f64) -> Result<OrbitTrace> {
    let mut out = OrbitTrace { sigma, times: vec![], zeros: vec![], angles: vec![], max_drift: vec![] };
    for s in traj.resolved_samples() {
        let psi = level_product(&s.state, sigma)?;
        let mut z = psi.zeros.clone();
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                if (z[i] - z[j]).norm() < match_tol {
                    return Err(Error::MatchingAmbiguity(s.t));
                }
            }
        }
        if let Some(prev) = out.zeros.last() {
            if prev.len() != z.len() {
                return Err(Error::DegreeMismatch { expected: prev.len(), reason: format!("degree changed at t = {}", s.t) });
            }
            let mut taken = vec![false; z.len()];
            let mut ordered = Vec::with_capacity(z.len());
            for p in prev {
                let j = (0..z.len())
                    .min_by(|&a, &b| (z[a] - p).norm().total_cmp(&(z[b] - p).norm()))
                    .expect("non-empty");
                if taken[j] {
                    return Err(Error::MatchingAmbiguity(s.t));
                }
                taken[j] = true;
                ordered.push(z[j]);
            }
            z = ordered;
        }
        out.times.push(s.t);
        out.angles.push(psi.angle);
        out.zeros.push(z);
    }
    if let Some(first) = out.zeros.first() {
        out.max_drift = (0..first.len())
            .map(|j| out.zeros.iter().map(|z| (z[j] - first[j]).norm()).fold(0.0, f64::max))
            .collect();
    }
    Ok(out)
}
