//! Phytoplankton–zooplankton dynamics with linear functional responses.
//!
//! The crate covers the nondimensional model
//!
//! ```text
//! continuous:  x' = x(1 - x) - xy          discrete:  x1 = x(2 - x) - xy
//!              y' = γxy - ry                          y1 = γxy + (1 - r)y
//! ```
//!
//! and the tools used to analyse it:
//!
//! * [`model`]: parameters, states, the vector field, the map and its fixed points.
//! * [`linear`]: Jacobians, 2×2 eigenvalues, unit-circle root location and
//!   fixed-point classification.
//! * [`flow`]: fixed-step RK4 integration and Lyapunov-function verification
//!   for the continuous system.
//! * [`discrete`]: orbits, invariant regions, LaSalle difference functions and
//!   convergence detection for the map.
//! * [`ns`]: the Neimark–Sacker pipeline at `γ₀ = 1 + r` (multipliers,
//!   transversality, normal form, discriminating quantity) and empirical
//!   invariant-curve detection.
//! * [`cli`]: the command-line front end behind the `phytozoo` binary.

pub mod cli;
pub mod discrete;
mod error;
pub mod flow;
pub mod linear;
pub mod model;
pub mod ns;

pub use error::{Error, Result};
pub use model::{FixedPoint, FixedPointLabel, Params, RawParams, State};
