//! Numerical laboratory for the α-Szegő equation
//! `i ∂_t u = Π(|u|²u) + α (u|1)` on the Hardy space of the circle.

pub mod blaschke;
pub mod crossing;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod hankel;
pub mod integrator;
pub mod invariants;
pub mod lax;
pub mod poly;
pub mod rational;
pub mod special;
pub mod spectral;
pub mod state;

pub use blaschke::{blaschke_eval, compose_with_blaschke, BlaschkeProduct};
pub use error::{Error, Result};
pub use grid::GridPlan;
pub use rational::{rational_to_fourier, RationalState};
pub use state::{inner_product, sobolev_norm, szego_project, FourierState, TwoSided};
