//! Structure-preserving integration of Duffing-type oscillators
//!
//! The equation `x'' + mu x' + alpha x^p = 0` (odd `p >= 3`, `mu >= 0`,
//! `alpha > 0`) is advanced with a discrete-gradient scheme whose discrete
//! energy obeys
//!
//! ```text
//! E^(n) + (mu/4) sum_{l<n} (y^(l+1) + y^(l))^2 dt = E^(0)
//! ```
//!
//! up to the accuracy of the per-step nonlinear solve. The [`analysis`]
//! module turns trajectories into energy ledgers, power-law decay fits and
//! empirical checks of the known decay bounds.
//!
//! ```
//! use duffing_core::{integrate, DuffingParams, SchemeConfig, State};
//!
//! let params = DuffingParams::new(3, 1.0, 1.0).unwrap();
//! let config = SchemeConfig::new(0.01, 10.0).unwrap();
//! let traj = integrate(&params, &config, State::new(2.0, 0.0)).unwrap();
//! let ledger = duffing_core::analysis::build_ledger(&traj).unwrap();
//! assert!(ledger.max_abs_residual() < 1e-10);
//! ```

pub mod analysis;
mod error;
pub mod integrator;
pub mod model;

pub use error::{Error, Result};
pub use integrator::{
    integrate, rk4_step, rk4_trajectory, sp_residual, sp_residual_derivative, sp_step, Sample,
    SchemeConfig, StepOutcome, Trajectory,
};
pub use model::{
    discrete_gradient, dissipation_functional, energy, modified_energy, potential, validate_params,
    vector_field, DuffingParams, State,
};
