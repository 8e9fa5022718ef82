//! Model nonlinearities, two-point fluxes, the semi-discrete right-hand side
//! and explicit time stepping.

mod flux;
mod params;
mod reaction;
mod rhs;
mod time;

pub use flux::{cell_flux, face_flux, BoundaryData, BoundaryValue, FluxOperator};
pub use params::{Drive, Limiter, ModelParams};
pub use reaction::{double_well_constant, f0, f0_prime, reaction_terms, w0, F0_PRIME_BOUND};
pub use rhs::{semi_discrete_rhs, Scheme, SolverState, Source};
pub use time::{advance, stable_dt, Integrator, Stepper};
