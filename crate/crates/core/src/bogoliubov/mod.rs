//! The Bogoliubov functional over translation-invariant quasi-free states.
//!
//! States are sampled on a radial momentum grid with weights for
//! (2π)⁻³∫d³p. Only real pairing amplitudes α are considered.

mod alpha;
mod functional;
mod grid;
mod minimize;

pub use alpha::{solve_alpha_equation, AlphaSolution};
pub use functional::{evaluate_functional, exchange_kernel, BogoliubovState, EnergyBreakdown, InteractionMode};
pub use grid::{GridSpec, MomentumGrid};
pub use minimize::{
    default_sweep_densities, depletion, lhy_slope, minimize, mode_scattering_length, sweep, sweep_point, Depletion,
    Diagnostics, Minimized, SolverSpec, SweepPoint,
};
