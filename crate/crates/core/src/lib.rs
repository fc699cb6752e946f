//! Ground states and sign-changing ground states of the discrete
//! p-Laplacian equation with logarithmic nonlinearity
//!
//! `-Δ(a(n-1) φ_p(Δu(n-1))) + b(n) φ_p(u(n)) = c(n) |u(n)|^(q-2) u(n) ln|u(n)|^r`
//!
//! on a truncated window `{-N, ..., N}` with zero values outside.
//!
//! The energy `I`, its derivative pairing and gradient live in [`energy`];
//! projections onto the Nehari set and the sign-changing set in [`nehari`];
//! multi-start projected descent in [`solver`]. The inequalities behind the
//! fiber-map arguments are evaluated numerically in [`inequalities`] and
//! sampled in bulk by [`verify`]. The `examples/` directory walks through
//! each piece.

pub mod cli;
pub mod dump;
pub mod energy;
pub mod error;
pub mod inequalities;
pub mod lattice;
pub mod nehari;
pub mod solver;
pub mod verify;

pub use energy::{
    decomposition_residuals, energy, fiber_g, fiber_h, gradient, pairing, DecompositionResiduals,
    EnergyReport, RaySums,
};
pub use error::{Error, Result};
pub use lattice::{
    appendix1_profile, forward_difference, lp_norm, sign_change_count, sign_split, weighted_norm_p,
    weighted_norm_pow, CoefficientFamily, CoefficientProfile, LatticeWindow, ProblemParams, Sequence,
};
pub use nehari::{
    fiber_max_check, nehari_norm_lower_bound, project_nehari, project_sign_changing, NehariPoint,
    SignChangingPoint,
};
pub use solver::{minimize_ground_state, minimize_sign_changing, Mode, SolveConfig, SolveResult};
