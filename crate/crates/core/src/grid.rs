//! Equispaced circle grids and the transforms between grid values and
//! Fourier coefficients.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::state::{FourierState, TwoSided};

/// Grid of `M` equispaced points `θ_m = 2πm/M` paired with a truncation `N`.
///
/// `M ≥ 3N` and a power of two. Products of three degree-`(N−1)`
/// polynomials then project onto modes `< N` without aliasing, and the mean
/// of `|u|⁴` is exact.
#[derive(Clone)]
pub struct GridPlan {
    grid_size: usize,
    truncation: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for GridPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridPlan")
            .field("grid_size", &self.grid_size)
            .field("truncation", &self.truncation)
            .finish()
    }
}

impl GridPlan {
    pub fn new(truncation: usize, grid_size: usize) -> Result<Self> {
        let needed = (3 * truncation).next_power_of_two();
        if truncation == 0 || grid_size < 3 * truncation || !grid_size.is_power_of_two() {
            return Err(Error::GridTooSmall { grid: grid_size, truncation, needed });
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            grid_size,
            truncation,
            forward: planner.plan_fft_forward(grid_size),
            inverse: planner.plan_fft_inverse(grid_size),
        })
    }

    /// Smallest admissible grid for `truncation`.
    pub fn for_truncation(truncation: usize) -> Self {
        Self::new(truncation, (3 * truncation).next_power_of_two())
            .expect("minimal grid is always admissible")
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Grid angles `θ_m`.
    pub fn angles(&self) -> Vec<f64> {
        let m = self.grid_size as f64;
        (0..self.grid_size)
            .map(|j| std::f64::consts::TAU * j as f64 / m)
            .collect()
    }

    /// Grid points `e^{iθ_m}`.
    pub fn points(&self) -> Vec<Complex64> {
        self.angles().into_iter().map(|t| Complex64::from_polar(1.0, t)).collect()
    }

    /// Values `u(e^{iθ_m}) = Σ_k û(k) e^{ikθ_m}`.
    pub fn to_grid(&self, u: &FourierState) -> Vec<Complex64> {
        assert!(u.truncation() <= self.grid_size, "state longer than grid");
        let mut buf = vec![Complex64::default(); self.grid_size];
        buf[..u.truncation()].copy_from_slice(u.coeffs());
        self.inverse.process(&mut buf);
        buf
    }

    /// Two-sided coefficients over frequencies `−M/2 .. M/2−1`.
    pub fn from_grid(&self, values: &[Complex64]) -> TwoSided {
        let buf = self.forward_scaled(values);
        let half = self.grid_size / 2;
        let mut coeffs = Vec::with_capacity(self.grid_size);
        coeffs.extend_from_slice(&buf[half..]);
        coeffs.extend_from_slice(&buf[..half]);
        TwoSided { min_freq: -(half as i64), coeffs }
    }

    /// Projection of grid values onto modes `0..n`.
    pub fn project_grid(&self, values: &[Complex64], n: usize) -> FourierState {
        assert!(n <= self.grid_size / 2, "projection beyond Nyquist");
        let mut buf = self.forward_scaled(values);
        buf.truncate(n);
        FourierState::new(buf).expect("transform of finite values is finite")
    }

    fn forward_scaled(&self, values: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.grid_size, "grid length mismatch");
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.grid_size as f64;
        for c in &mut buf {
            *c *= scale;
        }
        buf
    }

    fn check_dealiased(&self, u: &FourierState) {
        assert!(
            u.truncation() <= self.truncation,
            "state truncation {} exceeds plan truncation {}",
            u.truncation(),
            self.truncation
        );
    }

    /// Galerkin-truncated cubic term `Π_N(|u|²u)`.
    pub fn cubic(&self, u: &FourierState) -> FourierState {
        self.check_dealiased(u);
        let mut g = self.to_grid(u);
        for v in &mut g {
            *v *= v.norm_sqr();
        }
        self.project_grid(&g, u.truncation())
    }

    /// Two-sided coefficients of `|u|²` over `−(N−1)..=N−1`.
    pub fn abs_sq(&self, u: &FourierState) -> TwoSided {
        self.check_dealiased(u);
        let g: Vec<_> = self
            .to_grid(u)
            .into_iter()
            .map(|v| Complex64::new(v.norm_sqr(), 0.0))
            .collect();
        let full = self.from_grid(&g);
        let k = u.truncation() as i64 - 1;
        TwoSided { min_freq: -k, coeffs: (-k..=k).map(|f| full.at(f)).collect() }
    }

    /// Grid mean of `|u|⁴`, i.e. `∫|u|⁴ dθ/2π` for `N ≤ M/3`.
    pub fn l4_norm_fourth(&self, u: &FourierState) -> f64 {
        self.check_dealiased(u);
        let g = self.to_grid(u);
        g.iter().map(|v| v.norm_sqr() * v.norm_sqr()).sum::<f64>() / self.grid_size as f64
    }
}

pub fn to_grid(u: &FourierState, plan: &GridPlan) -> Vec<Complex64> {
    plan.to_grid(u)
}

pub fn from_grid(values: &[Complex64], plan: &GridPlan) -> TwoSided {
    plan.from_grid(values)
}

pub fn l4_norm_fourth(u: &FourierState, plan: &GridPlan) -> f64 {
    plan.l4_norm_fourth(u)
}
