//! Crossing detection: times at which a pair of `H_u` singular values
//! collapses onto a conserved `σ`.

use serde::{Deserialize, Serialize};

use crate::integrator::TrajectoryRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub t: f64,
    /// `min_j |ρ_j(t) − σ|`.
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingTime {
    pub t: f64,
    /// Gap at the refined minimum (0 when the refined parabola dips below).
    pub min_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub sigma: f64,
    pub gap_tol: f64,
    pub times: Vec<CrossingTime>,
    pub trace: Vec<GapPoint>,
    /// Smallest gap seen on the trace.
    pub min_gap: f64,
    /// Gap below tolerance on every sample: `u` solves the cubic Szegő
    /// equation and the level is degenerate for all time.
    pub permanent: bool,
    pub warnings: Vec<String>,
}

impl CrossingReport {
    /// Whether the gap vanishes somewhere (as opposed to staying positive).
    pub fn gap_vanishes(&self) -> bool {
        !self.times.is_empty() || self.permanent
    }
}

/// Gap `min_j |ρ_j − σ|` over the raw `H_u²` eigenvalues of one sample.
pub fn gap_at(h_eigenvalues: &[f64], sigma: f64) -> Option<f64> {
    h_eigenvalues
        .iter()
        .map(|&l| (l.max(0.0).sqrt() - sigma).abs())
        .min_by(f64::total_cmp)
}

/// Vertex of the parabola through three equispaced-or-not points.
fn parabola_vertex(t: [f64; 3], y: [f64; 3]) -> Option<(f64, f64)> {
    let d1 = (y[1] - y[0]) / (t[1] - t[0]);
    let d2 = (y[2] - y[1]) / (t[2] - t[1]);
    let a = (d2 - d1) / (t[2] - t[0]);
    if a <= 0.0 {
        return None;
    }
    let b = d1 - a * (t[0] + t[1]);
    let tv = -b / (2.0 * a);
    let yv = y[0] + (tv - t[0]) * (d1 + a * (tv - t[1]));
    Some((tv, yv))
}

/// Scans the gap trace at level `σ`. Local minima of the trace below
/// `gap_tol` are refined by a parabola through the squared gap at three
/// samples (a transversal crossing makes the squared gap locally
/// quadratic).
pub fn detect_crossings(traj: &TrajectoryRecord, sigma: f64, gap_tol: f64) -> CrossingReport {
    let trace: Vec<GapPoint> = traj
        .samples
        .iter()
        .filter_map(|s| {
            let spec = s.spectral.as_ref()?;
            Some(GapPoint { t: s.t, gap: gap_at(&spec.h_eigenvalues, sigma)? })
        })
        .collect();
    let mut warnings = Vec::new();
    if trace.len() < traj.samples.len() {
        warnings.push(format!("{} samples without spectral data", traj.samples.len() - trace.len()));
    }
    for w in trace.windows(2) {
        let (a, b) = (w[0].gap, w[1].gap);
        if a.max(b) > gap_tol && a.min(b) > 0.0 && a.max(b) > 10.0 * a.min(b) {
            warnings.push(format!("undersampled: gap changes {:.3e} -> {:.3e} on [{}, {}]", a, b, w[0].t, w[1].t));
        }
    }
    let min_gap = trace.iter().map(|p| p.gap).fold(f64::INFINITY, f64::min);
    let permanent = !trace.is_empty() && trace.iter().all(|p| p.gap < gap_tol);
    let mut times = Vec::new();
    if !permanent {
        let n = trace.len();
        for i in 0..n {
            let g = trace[i].gap;
            if g >= gap_tol {
                continue;
            }
            let left_ok = i == 0 || trace[i - 1].gap > g;
            let right_ok = i + 1 == n || trace[i + 1].gap >= g;
            if !(left_ok && right_ok) {
                continue;
            }
            if i == 0 || i + 1 == n {
                times.push(CrossingTime { t: trace[i].t, min_gap: g });
                continue;
            }
            let ts = [trace[i - 1].t, trace[i].t, trace[i + 1].t];
            let ys = [trace[i - 1].gap.powi(2), g * g, trace[i + 1].gap.powi(2)];
            let refined = parabola_vertex(ts, ys)
                .filter(|&(tv, _)| tv >= ts[0] && tv <= ts[2])
                .map(|(tv, yv)| CrossingTime { t: tv, min_gap: yv.max(0.0).sqrt() })
                .unwrap_or(CrossingTime { t: trace[i].t, min_gap: g });
            times.push(refined);
        }
    }
    CrossingReport { sigma, gap_tol, times, trace, min_gap, permanent, warnings }
}
