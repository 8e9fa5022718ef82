//! Finite volume discretization of a coupled heat / phase-field
//! solidification model on admissible polyhedral meshes, with the discrete
//! energy, interpolation and consistency diagnostics that go with it.

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod interp;
pub mod io;
pub mod mesh;
pub mod model;
pub mod quadrature;
pub mod run;

pub use error::{Error, Result};
