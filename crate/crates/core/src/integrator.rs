//! Time evolution of the Galerkin-truncated α-Szegő flow.
//!
//! `du/dt = −i (Π_N(|u|²u) + α û(0) e₀)`, integrated by the Dormand–Prince
//! 5(4) pair with PI step control. Steps are clamped so that every sample
//! time is hit exactly.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridPlan;
use crate::invariants::{ell_k, InvariantSet, LevelInvariant};
use crate::spectral::{decompose, effective_size, level_blaschke, pole_radius, DEFAULT_CLUSTER_REL_TOL};
use crate::state::{FourierState, DEFAULT_TAIL_TOL};

/// What is computed at each sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuditLevel {
    /// Invariants, spectral decomposition and pole radius.
    Full,
    /// Invariants and pole radius.
    NormsOnly,
    /// State only.
    StateOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub alpha: f64,
    pub truncation: usize,
    pub grid_size: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_max: f64,
    pub sample_interval: f64,
    /// `None` disables the resolution guard.
    pub tail_guard: Option<f64>,
    pub audit: AuditLevel,
    /// Highest `n` in the audited hierarchy `L_0..L_n`.
    pub hierarchy_order: usize,
    /// Largest matrix section used for sample spectra.
    pub spectral_cap: usize,
    pub max_steps: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            truncation: 64,
            grid_size: 256,
            rel_tol: 1e-11,
            abs_tol: 1e-13,
            t_max: 10.0,
            sample_interval: 0.05,
            tail_guard: Some(DEFAULT_TAIL_TOL),
            audit: AuditLevel::Full,
            hierarchy_order: 4,
            spectral_cap: 256,
            max_steps: 50_000_000,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<GridPlan> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        for (name, v) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(1e-14..=1e-6).contains(&v) {
                return bad(format!("{name} = {v} outside [1e-14, 1e-6]"));
            }
        }
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            return bad(format!("t_max = {} must be finite and non-negative", self.t_max));
        }
        if !(self.sample_interval > 0.0) {
            return bad("sample interval must be positive".into());
        }
        if !self.alpha.is_finite() {
            return bad("alpha must be finite".into());
        }
        GridPlan::new(self.truncation, self.grid_size)
    }
}

/// `du/dt = −i (Π(|u|²u) + α û(0) e₀)`.
pub fn rhs(u: &FourierState, alpha: f64, plan: &GridPlan) -> FourierState {
    let mut f = plan.cubic(u);
    f.coeffs_mut()[0] += alpha * u.coeff(0);
    let mi = Complex64::new(0.0, -1.0);
    for c in f.coeffs_mut() {
        *c *= mi;
    }
    f
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// difference between the fifth- and fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Stepper<'a> {
    alpha: f64,
    plan: &'a GridPlan,
    rel_tol: f64,
    abs_tol: f64,
}

struct StepOutcome {
    y: Vec<Complex64>,
    f_new: Vec<Complex64>,
    err: f64,
}

impl Stepper<'_> {
    fn f(&self, y: &[Complex64]) -> Vec<Complex64> {
        rhs(&FourierState::new(y.to_vec()).expect("finite state"), self.alpha, self.plan).into_coeffs()
    }

    /// One Dormand–Prince step from `(y, f0 = f(y))` with step `h`.
    fn step(&self, y: &[Complex64], f0: &[Complex64], h: f64) -> StepOutcome {
        let n = y.len();
        let mut k: Vec<Vec<Complex64>> = Vec::with_capacity(7);
        k.push(f0.to_vec());
        let mut ynew = vec![Complex64::default(); n];
        for s in 1..7 {
            let mut ys = y.to_vec();
            for (j, kj) in k.iter().enumerate() {
                let a = A[s][j] * h;
                if a != 0.0 {
                    for (yi, ki) in ys.iter_mut().zip(kj) {
                        *yi += a * ki;
                    }
                }
            }
            if s == 6 {
                ynew.clone_from(&ys);
            }
            k.push(self.f(&ys));
        }
        let _ = C;
        let mut err = 0.0f64;
        for i in 0..n {
            let e: Complex64 = (0..7).map(|s| E[s] * k[s][i]).sum::<Complex64>() * h;
            let sc = self.abs_tol + self.rel_tol * y[i].norm().max(ynew[i].norm());
            err = err.max(e.norm() / sc);
        }
        StepOutcome { y: ynew, f_new: k.pop().unwrap(), err }
    }

    fn initial_step(&self, y: &[Complex64], f0: &[Complex64]) -> f64 {
        let sc = |v: &[Complex64]| {
            v.iter()
                .zip(y)
                .map(|(a, b)| a.norm() / (self.abs_tol + self.rel_tol * b.norm()))
                .fold(0.0, f64::max)
        };
        let d0 = sc(y);
        let d1 = sc(f0);
        if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        }
    }
}

/// Adaptive integration from `t0` to `t1` (either direction) visiting
/// every time in `stops` exactly. Calls `visit(t, y, f)` at each stop and
/// `on_step(t, y)` after every accepted step; either may stop the run by
/// returning `false`.
struct Driver<'a> {
    stepper: Stepper<'a>,
    max_steps: usize,
}

enum DriveEnd {
    Completed,
    Stopped(f64),
}

impl Driver<'_> {
    fn run(
        &self,
        t0: f64,
        y0: Vec<Complex64>,
        stops: &[f64],
        mut on_step: impl FnMut(f64, &[Complex64]) -> bool,
        mut visit: impl FnMut(f64, &[Complex64]) -> bool,
    ) -> Result<(Vec<Complex64>, DriveEnd)> {
        let mut t = t0;
        let mut y = y0;
        let mut f = self.stepper.f(&y);
        let dir = match stops.last() {
            Some(&last) if last < t0 => -1.0,
            _ => 1.0,
        };
        let mut h = self.stepper.initial_step(&y, &f) * dir;
        let mut err_prev = 1e-4f64;
        let mut steps = 0usize;
        for &stop in stops {
            if (stop - t).abs() <= 1e-14 * (1.0 + t.abs()) {
                if !visit(stop, &y) {
                    return Ok((y, DriveEnd::Stopped(stop)));
                }
                continue;
            }
            while (stop - t) * dir > 0.0 {
                let remaining = stop - t;
                let clamped = h.abs() >= remaining.abs();
                let hh = if clamped { remaining } else { h };
                let out = self.stepper.step(&y, &f, hh);
                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::StepFailure { t, h: hh });
                }
                if out.err <= 1.0 && out.y.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
                    t = if clamped { stop } else { t + hh };
                    y = out.y;
                    f = out.f_new;
                    let e = out.err.max(1e-10);
                    let fac = (0.9 * e.powf(-0.17) * err_prev.powf(0.04)).clamp(0.2, 5.0);
                    err_prev = e;
                    if !clamped {
                        h = hh * fac;
                    } else if fac < 1.0 {
                        h *= fac;
                    }
                    if !on_step(t, &y) {
                        return Ok((y, DriveEnd::Stopped(t)));
                    }
                } else {
                    let e = if out.err.is_finite() { out.err } else { 1e10 };
                    h = hh * (0.9 * e.powf(-0.2)).clamp(0.1, 0.9);
                    if h.abs() < 1e-14 * (1.0 + t.abs()) {
                        return Err(Error::StepFailure { t, h });
                    }
                }
            }
            if !visit(stop, &y) {
                return Ok((y, DriveEnd::Stopped(stop)));
            }
        }
        Ok((y, DriveEnd::Completed))
    }
}

/// Adaptive evolution of `u` over time `dt` (negative allowed).
pub fn evolve(u: &FourierState, alpha: f64, plan: &GridPlan, dt: f64, rel_tol: f64, abs_tol: f64) -> Result<FourierState> {
    let driver = Driver {
        stepper: Stepper { alpha, plan, rel_tol, abs_tol },
        max_steps: 50_000_000,
    };
    let (y, _) = driver.run(0.0, u.coeffs().to_vec(), &[dt], |_, _| true, |_, _| true)?;
    FourierState::new(y)
}

/// One fixed Dormand–Prince step of size `h` (fifth-order solution).
pub fn fixed_step(u: &FourierState, alpha: f64, plan: &GridPlan, h: f64) -> FourierState {
    let s = Stepper { alpha, plan, rel_tol: 1e-11, abs_tol: 1e-11 };
    let f0 = s.f(u.coeffs());
    FourierState::new(s.step(u.coeffs(), &f0, h).y).expect("finite state")
}

/// Compact spectral record kept per sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub size: usize,
    /// Eigenvalues of `H_u²` above the cluster tolerance, descending.
    pub h_eigenvalues: Vec<f64>,
    /// Eigenvalues of `K_u²` above the cluster tolerance, descending.
    pub k_eigenvalues: Vec<f64>,
    /// `(ρ, ℓ)` over `Σ_H`.
    pub h_levels: Vec<(f64, usize)>,
    /// `(σ, m)` over `Σ_K`.
    pub k_levels: Vec<(f64, usize)>,
    pub ell: Vec<LevelInvariant>,
    /// Zeros of `Ψ_σ` for dominant K-levels with `m ≥ 2`, as `(σ, zeros)`.
    pub blaschke_zeros: Vec<(f64, Vec<Complex64>)>,
}

impl SpectralSummary {
    /// `σ` values of all positive K-clusters (from `ℓ_k` records).
    pub fn sigmas(&self) -> Vec<f64> {
        self.ell.iter().map(|l| l.sigma).filter(|&s| s > 0.0).collect()
    }

    /// `(ρ₁² − ρ₂²)/2` from the two largest `H_u²` eigenvalues.
    pub fn half_top_gap(&self) -> Option<f64> {
        match self.h_eigenvalues.as_slice() {
            [a, b, ..] => Some(0.5 * (a - b)),
            [a] => Some(0.5 * a),
            [] => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub state: FourierState,
    pub tail: f64,
    pub resolved: bool,
    pub invariants: Option<InvariantSet>,
    pub spectral: Option<SpectralSummary>,
    pub pole_radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    TailBreach { t: f64, tail: f64, tol: f64 },
    SpectralSkipped { t: f64, reason: String },
    Crossing { t: f64, sigma: f64, min_gap: f64 },
    Stopped { t: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub config: SimulationConfig,
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
    /// Last time reached (equals `t_max` unless the run stopped early).
    pub end_time: f64,
}

impl TrajectoryRecord {
    pub fn start_time(&self) -> f64 {
        self.samples.first().map_or(0.0, |s| s.t)
    }

    pub fn completed(&self) -> bool {
        (self.end_time - self.samples.first().map_or(0.0, |s| s.t) - self.config.t_max).abs() < 1e-9
    }

    pub fn tail_breach(&self) -> Option<f64> {
        self.events.iter().find_map(|e| match e {
            Event::TailBreach { t, .. } => Some(*t),
            _ => None,
        })
    }

    /// Samples flagged resolved.
    pub fn resolved_samples(&self) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(|s| s.resolved)
    }

    /// State at time `t`: the sample itself or an adaptive continuation from
    /// the nearest earlier sample.
    pub fn state_at(&self, t: f64) -> Result<FourierState> {
        let (start, end) = (self.start_time(), self.end_time);
        if !(t >= start - 1e-12 && t <= end + 1e-12) {
            return Err(Error::OutsideTrajectory { t, start, end });
        }
        let s = self
            .samples
            .iter()
            .rev()
            .find(|s| s.t <= t + 1e-12)
            .ok_or(Error::OutsideTrajectory { t, start, end })?;
        if (s.t - t).abs() <= 1e-12 {
            return Ok(s.state.clone());
        }
        let plan = self.config.validate()?;
        evolve(&s.state, self.config.alpha, &plan, t - s.t, self.config.rel_tol, self.config.abs_tol)
    }

    pub fn sample_at(&self, t: f64) -> Option<&Sample> {
        self.samples.iter().find(|s| (s.t - t).abs() <= 1e-12)
    }
}

fn audit_sample(t: f64, u: FourierState, config: &SimulationConfig, plan: &GridPlan, events: &mut Vec<Event>) -> Sample {
    let tail = u.tail_amplitude();
    let resolved = config.tail_guard.is_none_or(|tol| tail <= tol);
    let mut sample = Sample { t, tail, resolved, invariants: None, spectral: None, pole_radius: None, state: u };
    if config.audit == AuditLevel::StateOnly {
        return sample;
    }
    let u = &sample.state;
    sample.pole_radius = Some(pole_radius(u));
    let mut dec = None;
    if config.audit == AuditLevel::Full {
        let m = effective_size(u, 1e-16).max(2).min(u.truncation());
        if m > config.spectral_cap {
            events.push(Event::SpectralSkipped { t, reason: format!("effective size {m} exceeds cap {}", config.spectral_cap) });
        } else {
            match decompose(u, m, DEFAULT_CLUSTER_REL_TOL) {
                Ok(d) => dec = Some(d),
                Err(e) => events.push(Event::SpectralSkipped { t, reason: e.to_string() }),
            }
        }
    }
    sample.invariants = Some(InvariantSet::compute(u, config.alpha, plan, config.hierarchy_order, dec.as_ref()));
    sample.spectral = dec.map(|d| SpectralSummary {
        size: d.size,
        blaschke_zeros: d
            .k_levels
            .iter()
            .filter(|l| l.value > 0.0 && l.multiplicity >= 2)
            .map(|l| (l.value, level_blaschke(u, l).map(|b| b.zeros).unwrap_or_default()))
            .collect(),
        h_levels: d.h_levels.iter().map(|l| (l.value, l.multiplicity)).collect(),
        k_levels: d.k_levels.iter().map(|l| (l.value, l.multiplicity)).collect(),
        ell: ell_k(&d, config.alpha),
        h_eigenvalues: d.h_eigenvalues,
        k_eigenvalues: d.k_eigenvalues,
    });
    sample
}

/// Sample times `t0, t0+Δ, …, t0+T`.
pub fn sample_times(t0: f64, config: &SimulationConfig) -> Vec<f64> {
    let n = (config.t_max / config.sample_interval - 1e-9).ceil().max(0.0) as usize;
    let mut v: Vec<f64> = (0..n).map(|j| t0 + j as f64 * config.sample_interval).collect();
    v.push(t0 + config.t_max);
    v
}

/// Integrates from `u0` at `t = 0`.
pub fn integrate(config: &SimulationConfig, u0: &FourierState) -> Result<TrajectoryRecord> {
    integrate_from(config, u0, 0.0, |_| true)
}

/// Integrates from `u0` at `t0` over `config.t_max`. `on_sample` sees each
/// audited sample and may stop the run by returning `false`.
pub fn integrate_from(
    config: &SimulationConfig,
    u0: &FourierState,
    t0: f64,
    mut on_sample: impl FnMut(&Sample) -> bool,
) -> Result<TrajectoryRecord> {
    let plan = config.validate()?;
    if u0.truncation() != config.truncation {
        return Err(Error::InvalidInput(format!(
            "initial state has {} modes, config expects {}",
            u0.truncation(),
            config.truncation
        )));
    }
    if let Some(tol) = config.tail_guard {
        u0.ensure_resolved(tol)?;
    }
    let stops = sample_times(t0, config);
    let driver = Driver {
        stepper: Stepper { alpha: config.alpha, plan: &plan, rel_tol: config.rel_tol, abs_tol: config.abs_tol },
        max_steps: config.max_steps,
    };
    let mut samples = Vec::new();
    let mut events = Vec::new();
    let mut breach: Option<(f64, Vec<Complex64>, f64)> = None;
    let (y, end) = {
        let events_ref = &mut events;
        let samples_ref = &mut samples;
        let breach_ref = &mut breach;
        driver.run(
            t0,
            u0.coeffs().to_vec(),
            &stops,
            |t, y| {
                let Some(tol) = config.tail_guard else { return true };
                let n = y.len();
                let tail = y[n - n / 8..].iter().map(|c| c.norm()).fold(0.0, f64::max);
                if tail > tol {
                    *breach_ref = Some((t, y.to_vec(), tail));
                    return false;
                }
                true
            },
            |t, y| {
                let s = audit_sample(t, FourierState::new(y.to_vec()).expect("finite"), config, &plan, events_ref);
                let go = on_sample(&s);
                samples_ref.push(s);
                go
            },
        )?
    };
    let end_time = match end {
        DriveEnd::Completed => t0 + config.t_max,
        DriveEnd::Stopped(t) => {
            if let Some((tb, yb, tail)) = breach.take() {
                events.push(Event::TailBreach { t: tb, tail, tol: config.tail_guard.unwrap_or(0.0) });
                let s = audit_sample(tb, FourierState::new(yb)?, config, &plan, &mut events);
                samples.push(s);
            } else {
                events.push(Event::Stopped { t });
            }
            t
        }
    };
    let _ = y;
    Ok(TrajectoryRecord { config: config.clone(), samples, events, end_time })
}

/// Current checkpoint format version.
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub config: SimulationConfig,
    pub t: f64,
    pub state: FourierState,
}

impl Checkpoint {
    pub fn from_record(rec: &TrajectoryRecord) -> Option<Self> {
        let last = rec.samples.iter().rev().find(|s| s.resolved)?;
        Some(Self { version: CHECKPOINT_VERSION, config: rec.config.clone(), t: last.t, state: last.state.clone() })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let c: Self = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if c.version != CHECKPOINT_VERSION {
            return Err(Error::InvalidInput(format!("checkpoint version {} (expected {CHECKPOINT_VERSION})", c.version)));
        }
        Ok(c)
    }

    /// Continues the run for another `config.t_max`.
    pub fn resume(&self) -> Result<TrajectoryRecord> {
        integrate_from(&self.config, &self.state, self.t, |_| true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(alpha: f64, n: usize, t_max: f64) -> SimulationConfig {
        SimulationConfig {
            alpha,
            truncation: n,
            grid_size: (3 * n).next_power_of_two(),
            t_max,
            sample_interval: 0.5,
            audit: AuditLevel::StateOnly,
            ..SimulationConfig::default()
        }
    }

    #[test]
    fn rhs_examples() {
        let plan = GridPlan::for_truncation(8);
        let c = Complex64::new(0.3, 0.4);
        let f = rhs(&FourierState::monomial(8, 0, c), 2.0, &plan);
        assert!((f.coeff(0) - Complex64::new(0.0, -1.0) * (c.norm_sqr() + 2.0) * c).norm() < 1e-15);
        let f = rhs(&FourierState::from_real(8, &[0.0, 1.0]), 5.0, &plan);
        assert!(f.max_abs_diff(&FourierState::monomial(8, 1, Complex64::new(0.0, -1.0))) < 1e-15);
        assert!(rhs(&FourierState::zeros(8), 1.0, &plan).l2_norm() == 0.0);
    }

    #[test]
    fn constant_orbit() {
        let c = Complex64::new(0.6, -0.2);
        let cfg = quick(1.5, 8, 10.0);
        let rec = integrate(&cfg, &FourierState::monomial(8, 0, c)).unwrap();
        let last = rec.samples.last().unwrap();
        assert_eq!(last.t, 10.0);
        let exact = c * Complex64::from_polar(1.0, -(c.norm_sqr() + 1.5) * 10.0);
        assert!((last.state.coeff(0) - exact).norm() < 1e-9);
    }

    #[test]
    fn backward_evolution_returns() {
        let plan = GridPlan::for_truncation(16);
        let u = FourierState::from_real(16, &[1.0, 0.5]);
        let v = evolve(&u, 1.0, &plan, 0.7, 1e-12, 1e-12).unwrap();
        let w = evolve(&v, 1.0, &plan, -0.7, 1e-12, 1e-12).unwrap();
        assert!(w.l2_distance(&u) < 1e-9);
    }

    #[test]
    fn samples_are_exact_and_increasing() {
        let cfg = SimulationConfig { sample_interval: 0.3, ..quick(1.0, 64, 1.0) };
        let rec = integrate(&cfg, &FourierState::from_real(64, &[1.0, 0.5])).unwrap();
        let ts: Vec<f64> = rec.samples.iter().map(|s| s.t).collect();
        assert_eq!(ts.len(), 5);
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*ts.last().unwrap(), 1.0);
        let mid = rec.state_at(0.45).unwrap();
        let direct = evolve(&rec.samples[0].state, 1.0, &GridPlan::for_truncation(64), 0.45, 1e-11, 1e-11).unwrap();
        assert!(mid.l2_distance(&direct) < 1e-9);
        assert!(rec.state_at(2.0).is_err());
    }

    #[test]
    fn tail_breach_stops_run() {
        // 1+z at α = 1 pushes its pole to the circle; 16 modes last briefly
        let cfg = quick(1.0, 16, 10.0);
        let rec = integrate(&cfg, &FourierState::from_real(16, &[1.0, 1.0])).unwrap();
        let tb = rec.tail_breach().expect("breach");
        assert!(tb < 10.0);
        assert!(!rec.samples.last().unwrap().resolved);
        assert!(!rec.completed());
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = SimulationConfig { rel_tol: 1e-3, ..SimulationConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = SimulationConfig { grid_size: 100, ..SimulationConfig::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn checkpoint_round_trip() {
        let cfg = quick(1.0, 64, 0.5);
        let rec = integrate(&cfg, &FourierState::from_real(64, &[1.0, 0.5])).unwrap();
        let cp = Checkpoint::from_record(&rec).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        cp.save(&path).unwrap();
        let back = Checkpoint::load(&path).unwrap();
        assert_eq!(back.state, cp.state);
        let more = back.resume().unwrap();
        assert_eq!(more.samples[0].t, 0.5);
        assert_eq!(more.end_time, 1.0);
    }
}
