//! Post-processing of trajectories: growth fits, rank-drop audit and the
//! `‖1/(1−pΨ)‖_{H^s}` lower bound.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::integrator::TrajectoryRecord;
use crate::invariants::LevelInvariant;
use crate::poly;
use crate::rational::{rational_to_fourier, RationalState};
use crate::state::sobolev_norm;

/// Least-squares line `y = a x + b`; returns `(a, b, R²)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (a, b, r2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub s: f64,
    pub window: (f64, f64),
    /// Fitted `d log‖u‖_{H^s} / dt`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub samples: usize,
}

impl GrowthFit {
    /// `C_α = slope / (2s − 1)`; undefined at `s = 1/2`.
    pub fn c_alpha(&self) -> Option<f64> {
        let d = 2.0 * self.s - 1.0;
        (d.abs() > 1e-12).then(|| self.slope / d)
    }
}

fn window_points(
    traj: &TrajectoryRecord,
    window: (f64, f64),
    f: impl Fn(&crate::integrator::Sample) -> Option<f64>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (lo, hi) = window;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for s in traj.samples.iter().filter(|s| s.t >= lo - 1e-12 && s.t <= hi + 1e-12) {
        if !s.resolved {
            return Err(Error::WindowUnresolved { lo, hi, count: xs.len() });
        }
        if let Some(y) = f(s) {
            xs.push(s.t);
            ys.push(y);
        }
    }
    if xs.len() < 3 || hi > traj.end_time + 1e-12 {
        return Err(Error::WindowUnresolved { lo, hi, count: xs.len() });
    }
    Ok((xs, ys))
}

/// Fits of `log‖u(t)‖_{H^s}` on each window, for each `s`.
pub fn fit_growth(traj: &TrajectoryRecord, s_values: &[f64], windows: &[(f64, f64)]) -> Result<Vec<GrowthFit>> {
    let mut out = Vec::new();
    for &w in windows {
        for &s in s_values {
            let (xs, ys) = window_points(traj, w, |smp| Some(sobolev_norm(&smp.state, s).ln()))?;
            let (slope, intercept, r_squared) = fit_line(&xs, &ys);
            out.push(GrowthFit { s, window: w, slope, intercept, r_squared, samples: xs.len() });
        }
    }
    Ok(out)
}

/// Fit of `log(1 − |p(t)|)` against `t` from the per-sample pole radius.
pub fn fit_pole_decay(traj: &TrajectoryRecord, window: (f64, f64)) -> Result<(f64, f64, f64)> {
    let (xs, ys) = window_points(traj, window, |s| s.pole_radius.map(|r| (1.0 - r).max(1e-300).ln()))?;
    Ok(fit_line(&xs, &ys))
}

/// Largest window `[t_lo, end]` of resolved samples, `t_lo` the transient
/// cutoff.
pub fn resolved_window(traj: &TrajectoryRecord, t_lo: f64) -> (f64, f64) {
    let hi = traj.resolved_samples().map(|s| s.t).fold(t_lo, f64::max);
    (t_lo, hi)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankDropReport {
    pub alpha: f64,
    pub ell0: Vec<LevelInvariant>,
    /// `min_k |ℓ_k(u₀)|` over positive levels.
    pub min_abs_ell: f64,
    /// Some `ℓ_k(u₀)` vanishes: the necessary condition for a rank drop holds.
    pub necessary_condition_met: bool,
    /// `(t, smallest positive K singular value)`.
    pub k_min_trace: Vec<(f64, f64)>,
    pub pole_trace: Vec<(f64, f64)>,
    pub max_pole_radius: f64,
    /// `1 − 10/N`.
    pub pole_threshold: f64,
    /// The smallest singular value in the last quarter stays below half its
    /// initial value.
    pub sustained_decay: bool,
}

/// Tolerance for `ℓ_k(u₀) = 0`.
pub const ELL_ZERO_TOL: f64 = 1e-8;

pub fn rank_drop_audit(traj: &TrajectoryRecord, ell0: &[LevelInvariant]) -> RankDropReport {
    let pos: Vec<_> = ell0.iter().filter(|l| l.sigma > 0.0).collect();
    let min_abs_ell = pos.iter().map(|l| l.ell.abs()).fold(f64::INFINITY, f64::min);
    let k_min_trace: Vec<(f64, f64)> = traj
        .resolved_samples()
        .filter_map(|s| {
            let spec = s.spectral.as_ref()?;
            spec.k_eigenvalues.last().map(|&l| (s.t, l.max(0.0).sqrt()))
        })
        .collect();
    let pole_trace: Vec<(f64, f64)> =
        traj.resolved_samples().filter_map(|s| s.pole_radius.map(|r| (s.t, r))).collect();
    let max_pole_radius = pole_trace.iter().map(|p| p.1).fold(0.0, f64::max);
    let sustained_decay = match (k_min_trace.first(), k_min_trace.len()) {
        (Some(&(_, k0)), n) if n >= 4 => k_min_trace[3 * n / 4..].iter().all(|&(_, k)| k < 0.5 * k0),
        _ => false,
    };
    RankDropReport {
        alpha: traj.config.alpha,
        ell0: ell0.to_vec(),
        min_abs_ell,
        necessary_condition_met: min_abs_ell <= ELL_ZERO_TOL,
        k_min_trace,
        pole_trace,
        max_pole_radius,
        pole_threshold: 1.0 - 10.0 / traj.config.truncation as f64,
        sustained_decay,
    }
}

/// `‖1/(1 − pΨ)‖_{H^s}` from the power series of the rational function
/// `D/(D − p e^{−iψ} P)`, doubling the truncation until the tail is below
/// `tail_tol` (at most `max_modes`).
pub fn inverse_norm(psi: &BlaschkeProduct, p: Complex64, s: f64, tail_tol: f64, max_modes: usize) -> Result<(f64, usize)> {
    let d = psi.denominator();
    let pp = psi.numerator();
    let len = d.len().max(pp.len());
    let denom: Vec<Complex64> = (0..len)
        .map(|k| d.get(k).copied().unwrap_or_default() - p * psi.phase() * pp.get(k).copied().unwrap_or_default())
        .collect();
    let r = RationalState::new(d.clone(), poly::trim(&denom, 0.0))?;
    let mut n = 1024;
    loop {
        match rational_to_fourier(&r, n, tail_tol) {
            Ok(u) => return Ok((sobolev_norm(&u, s), n)),
            Err(Error::Unresolved { tail, .. }) if n >= max_modes => {
                return Err(Error::TruncationInsufficient { tail, p: p.norm() });
            }
            Err(Error::Unresolved { .. }) => n *= 2,
            Err(e) => return Err(e),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub s: f64,
    pub degree: usize,
    /// `(1 − |p|, ‖1/(1−pΨ)‖_{H^s})`.
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub r_squared: f64,
    /// `−(s + 1/2) + 0.05`.
    pub bound: f64,
    pub passed: bool,
}

/// Log-log slope of `‖1/(1−pΨ)‖_{H^s}` against `1 − |p|` along `ps`.
pub fn blaschke_lower_bound_check(psi: &BlaschkeProduct, s: f64, ps: &[Complex64]) -> Result<LowerBoundReport> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::InvalidInput(format!("s = {s} outside [0, 1)")));
    }
    let mut points = Vec::with_capacity(ps.len());
    for &p in ps {
        if p.norm() >= 1.0 {
            return Err(Error::InvalidInput(format!("|p| = {} ≥ 1", p.norm())));
        }
        let (v, _) = inverse_norm(psi, p, s, 1e-15, 1 << 22)?;
        points.push((1.0 - p.norm(), v));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (slope, _, r_squared) = fit_line(&xs, &ys);
    let bound = -(s + 0.5) + 0.05;
    Ok(LowerBoundReport { s, degree: psi.degree(), points, slope, r_squared, bound, passed: slope <= bound })
}

/// `|p| = 1 − 10^{−j/4}`, `j = 8..=16`, on the positive axis.
pub fn default_p_sequence() -> Vec<Complex64> {
    (8..=16).map(|j| Complex64::from(1.0 - 10f64.powf(-(j as f64) / 4.0))).collect()
}
