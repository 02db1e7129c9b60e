//! Fractional calculus on uniform time grids and a spectral solver for the
//! time-fractional heat equation ∂_t^α u - Δu = f on an interval with
//! homogeneous Dirichlet conditions.
//!
//! * [`mittag_leffler`]: certified E_{α,β}(z) on the real line.
//! * [`fracops`]: Riemann-Liouville integrals and Caputo derivatives.
//! * [`norms`]: Slobodeckij seminorms, spectral H^s norms and Bochner combinations.
//! * [`spectral`]: the per-mode Mittag-Leffler solver and the stability ratio.
//! * [`l1`]: an independent L1 time-stepping solver used for cross-validation.

pub mod error;
pub mod fracops;
pub mod l1;
pub mod mittag_leffler;
pub mod norms;
pub mod quad;
pub mod spectral;

pub use error::{Error, Result};
pub use fracops::{caputo_l1, caputo_via_rl, rl_left, rl_right, FracOrder, GridFunction, TimeGrid};
pub use l1::{cross_validate, solve_l1, ConvergenceReport};
pub use mittag_leffler::{ml, ml_deriv, MlParams};
pub use norms::{
    bochner_seminorm, full_solution_norm, seminorm_via_rl, slobodeckij_seminorm, spatial_norm,
    ModeTrajectories, SpectralField,
};
pub use spectral::{
    eigenpairs, evaluate, solve, stability_ratio, Forcing, ProblemSpec, SolutionField,
};
