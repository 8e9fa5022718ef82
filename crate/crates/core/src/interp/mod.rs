//! Dual mesh, the piecewise constant (`S`) and axial piecewise linear (`Q`)
//! reconstructions of cell values, and the discrete inner products.

mod dual;
mod interpolants;
mod norms;
mod qs;

pub use dual::{build_dual, DualCell, DualMesh};
pub use interpolants::{eval_interpolants, q_gradient, DualLocation};
pub use norms::{discrete_products, inner, norm2, q_gradient_l2, seminorm2, DiscreteProducts};
pub use qs::{dual_cell_l2, qs_constant, qs_form};

use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::mesh::Mesh;

/// One finite value per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshFunction {
    values: Vec<f64>,
}

impl MeshFunction {
    pub fn new(mesh: &Mesh, values: Vec<f64>) -> Result<Self> {
        check_len(mesh, &values)?;
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!("value of cell {k} is not finite")));
        }
        Ok(MeshFunction { values })
    }

    pub fn constant(mesh: &Mesh, c: f64) -> Self {
        MeshFunction {
            values: vec![c; mesh.n_cells()],
        }
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        MeshFunction { values }
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.values
    }
}

impl Deref for MeshFunction {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

impl DerefMut for MeshFunction {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

pub(crate) fn check_len(mesh: &Mesh, w: &[f64]) -> Result<()> {
    if w.len() != mesh.n_cells() {
        return Err(Error::MeshMismatch {
            expected: mesh.n_cells(),
            got: w.len(),
        });
    }
    Ok(())
}

/// Samples `f` at the significant points: `w_K = f(x_K)`.
pub fn project(mesh: &Mesh, f: impl Fn(Vec3) -> f64) -> Result<MeshFunction> {
    let values = mesh
        .cells()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let v = f(c.center);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::input(format!("field is not finite at the point of cell {k}")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MeshFunction { values })
}
