//! Admissibility of competing weak solutions by least action and by entropy rate.
//!
//! The crate compares candidate solutions of three non-unique initial value
//! problems:
//!
//! * the planar barotropic Riemann problem, where the classical two-shock
//!   solution competes with the convex-integration family built on fan
//!   sub-solutions ([`riemann`], [`subsolution`], [`action`]);
//! * the Dafermos oscillator, whose trajectories may leave the origin on any
//!   circle ([`oscillator`]);
//! * the Akramov-Wiedemann solutions described by a scalar kinetic-energy
//!   profile ([`aw_profiles`]).
//!
//! Everything is a pure function of immutable values.

pub mod action;
pub mod aw_profiles;
pub mod eos;
mod error;
pub mod oscillator;
pub mod riemann;
pub mod subsolution;

pub use error::{Error, Result};

pub use action::{
    action_convex_integration, action_two_shock, dissipation_difference, l_diff,
    l_diff_derivative_bound, laap_corollary_check, laap_theorem_check, laap_verdict, Criterion,
    FanDomain, Preference, Verdict, Wedge,
};
pub use eos::PressureLaw;
pub use riemann::{
    check_two_shock_conditions, shock_energy_production, solve_middle_state, RiemannData, State,
    TwoShockSolution,
};
pub use subsolution::{solve_fan, ClosureRule, FanSubsolution, TraceFreeSym2};

/// Absolute tolerance for comparisons against zero.
pub const ZERO_TOL: f64 = 1e-12;
