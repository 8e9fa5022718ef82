use super::check_len;
use crate::error::{Error, Result};
use crate::geometry::{dot, scale, sub, Vec3};
use crate::mesh::Mesh;

/// Half dual cell containing a point: the pyramid with apex `x_K` of
/// `cell` over `face`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualLocation {
    pub cell: usize,
    pub face: usize,
}

impl DualLocation {
    /// Cell `K` containing `x`, then the face of `K` first hit by the ray from
    /// `x_K` through `x`. Ties go to the lowest index.
    pub fn find(mesh: &Mesh, x: Vec3) -> Result<Self> {
        let k = mesh.locate(x).ok_or(Error::OutsideDomain(x))?;
        let xk = mesh.cell(k).center;
        let dir = sub(x, xk);
        let mut best: Option<(f64, usize)> = None;
        for &f in mesh.cell_faces(k) {
            let n = mesh.outward_normal(f, k);
            let along = dot(dir, n);
            if along <= 0.0 {
                continue;
            }
            let t = -mesh.signed_distance(f, k, xk) / along;
            if best.is_none_or(|(bt, _)| t < bt) {
                best = Some((t, f));
            }
        }
        // x == x_K lies in every half cell of K
        let face = best.map_or(mesh.cell_faces(k)[0], |(_, f)| f);
        Ok(DualLocation { cell: k, face })
    }
}

/// Endpoint of the axial segment of `loc` and the value `Q` takes there.
fn far_end(mesh: &Mesh, w: &[f64], loc: DualLocation) -> (Vec3, f64) {
    let face = mesh.face(loc.face);
    match face.other(loc.cell) {
        Some(l) => (mesh.cell(l).center, w[l]),
        None => (mesh.metrics(loc.face).foot, 0.0),
    }
}

/// Values of `S w` and `Q w` at `x`.
pub fn eval_interpolants(mesh: &Mesh, w: &[f64], x: Vec3) -> Result<(f64, f64)> {
    check_len(mesh, w)?;
    let loc = DualLocation::find(mesh, x)?;
    let xk = mesh.cell(loc.cell).center;
    let wk = w[loc.cell];
    let (y, wy) = far_end(mesh, w, loc);
    let axis = sub(y, xk);
    let s = dot(sub(x, xk), axis) / dot(axis, axis);
    Ok((wk, wk + s * (wy - wk)))
}

/// Gradient of `Q w` on the dual cell over `face`; constant there.
pub fn q_gradient(mesh: &Mesh, w: &[f64], face: usize) -> Vec3 {
    let f = mesh.face(face);
    let loc = DualLocation {
        cell: f.owner,
        face,
    };
    let xk = mesh.cell(f.owner).center;
    let (y, wy) = far_end(mesh, w, loc);
    let axis = sub(y, xk);
    scale(axis, (wy - w[f.owner]) / dot(axis, axis))
}
