use std::fmt;
use std::sync::Arc;

use crate::geometry::Vec3;
use crate::mesh::Mesh;

/// Dirichlet data for one unknown, evaluated at boundary foot points.
#[derive(Clone, Default)]
pub enum BoundaryValue {
    #[default]
    Zero,
    Constant(f64),
    /// `(t, y_σ) -> value`
    Field(Arc<dyn Fn(f64, Vec3) -> f64 + Send + Sync>),
}

impl fmt::Debug for BoundaryValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryValue::Zero => write!(f, "Zero"),
            BoundaryValue::Constant(c) => write!(f, "Constant({c})"),
            BoundaryValue::Field(_) => write!(f, "Field(..)"),
        }
    }
}

impl BoundaryValue {
    pub fn eval(&self, t: f64, y: Vec3) -> f64 {
        match self {
            BoundaryValue::Zero => 0.0,
            BoundaryValue::Constant(c) => *c,
            BoundaryValue::Field(g) => g(t, y),
        }
    }

    pub fn is_time_dependent(&self) -> bool {
        matches!(self, BoundaryValue::Field(_))
    }
}

#[derive(Debug, Clone, Default)]
pub struct BoundaryData {
    pub u: BoundaryValue,
    pub p: BoundaryValue,
}

/// `F_{K,σ}` seen from cell `k` (which must be adjacent to face `f`).
pub fn face_flux(mesh: &Mesh, w: &[f64], data: &BoundaryValue, t: f64, f: usize, k: usize) -> f64 {
    let face = mesh.face(f);
    let m = mesh.metrics(f);
    let other = match face.other(k) {
        Some(l) => w[l],
        None => data.eval(t, m.foot),
    };
    -m.tau * (other - w[k])
}

/// `F_K = Σ_{σ∈E_K} F_{K,σ}`, summed in face order.
pub fn cell_flux(mesh: &Mesh, w: &[f64], data: &BoundaryValue, t: f64, k: usize) -> f64 {
    mesh.cell_faces(k)
        .iter()
        .map(|&f| face_flux(mesh, w, data, t, f, k))
        .sum()
}

/// Cell-to-face incidence in compressed rows, for fast flux evaluation.
///
/// Row `K` lists, in face order, the transmissibility of each face of `K`
/// and the index of the value across it: a cell index below `n_cells`, or
/// `n_cells + b` for the `b`-th boundary face.
#[derive(Debug, Clone)]
pub struct FluxOperator {
    offsets: Vec<u32>,
    across: Vec<u32>,
    tau: Vec<f64>,
    inv_volume: Vec<f64>,
    boundary_faces: Vec<usize>,
    boundary_feet: Vec<Vec3>,
}

impl FluxOperator {
    pub fn new(mesh: &Mesh) -> Self {
        let n = mesh.n_cells();
        let boundary_faces: Vec<usize> = mesh.boundary_faces().collect();
        let mut ordinal = vec![usize::MAX; mesh.n_faces()];
        for (b, &f) in boundary_faces.iter().enumerate() {
            ordinal[f] = b;
        }
        let narrow = |i: usize| u32::try_from(i).expect("mesh too large for 32-bit face indexing");
        let mut offsets = Vec::with_capacity(n + 1);
        let mut across = Vec::new();
        let mut tau = Vec::new();
        offsets.push(0);
        for k in 0..n {
            for &f in mesh.cell_faces(k) {
                across.push(narrow(match mesh.face(f).other(k) {
                    Some(l) => l,
                    None => n + ordinal[f],
                }));
                tau.push(mesh.metrics(f).tau);
            }
            offsets.push(narrow(across.len()));
        }
        FluxOperator {
            offsets,
            across,
            tau,
            inv_volume: mesh.cells().iter().map(|c| 1.0 / c.volume).collect(),
            boundary_feet: boundary_faces.iter().map(|&f| mesh.metrics(f).foot).collect(),
            boundary_faces,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.inv_volume.len()
    }

    pub fn boundary_faces(&self) -> &[usize] {
        &self.boundary_faces
    }

    pub fn boundary_values(&self, data: &BoundaryValue, t: f64) -> Vec<f64> {
        self.boundary_feet.iter().map(|&y| data.eval(t, y)).collect()
    }

    /// `F_K(w, g) / m(K)` for cell `k`, `g` holding boundary values.
    #[inline]
    pub fn divergence(&self, w: &[f64], g: &[f64], k: usize) -> f64 {
        let n = self.inv_volume.len();
        let wk = w[k];
        let mut s = 0.0;
        let (across, tau) = self.row(k);
        for (&o, &t) in across.iter().zip(tau) {
            let o = o as usize;
            let wo = if o < n { w[o] } else { g[o - n] };
            s += t * (wk - wo);
        }
        s * self.inv_volume[k]
    }

    #[inline]
    fn row(&self, k: usize) -> (&[u32], &[f64]) {
        let r = self.offsets[k] as usize..self.offsets[k + 1] as usize;
        (&self.across[r.clone()], &self.tau[r])
    }

    /// [`divergence`](Self::divergence) of two fields at once.
    pub fn divergence_pair(&self, a: (&[f64], &[f64]), b: (&[f64], &[f64]), k: usize) -> (f64, f64) {
        let n = self.inv_volume.len();
        let (wa, ga) = a;
        let (wb, gb) = b;
        let (ak, bk) = (wa[k], wb[k]);
        let (mut sa, mut sb) = (0.0, 0.0);
        let (across, tau) = self.row(k);
        for (&o, &t) in across.iter().zip(tau) {
            let o = o as usize;
            let (oa, ob) = if o < n { (wa[o], wb[o]) } else { (ga[o - n], gb[o - n]) };
            sa += t * (ak - oa);
            sb += t * (bk - ob);
        }
        (sa * self.inv_volume[k], sb * self.inv_volume[k])
    }

    /// Largest `Σ_{σ∈E_K} τ_σ / m(K)`.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.n_cells())
            .map(|k| self.row(k).1.iter().sum::<f64>() * self.inv_volume[k])
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::uniform_box;

    #[test]
    fn two_cell_antisymmetry() {
        let m = uniform_box([1.0; 3], [2, 1, 1]).unwrap();
        let f = m.interior_faces().next().unwrap();
        let w = [0.0, 1.0];
        assert_eq!(face_flux(&m, &w, &BoundaryValue::Zero, 0.0, f, 0), -2.0);
        assert_eq!(face_flux(&m, &w, &BoundaryValue::Zero, 0.0, f, 1), 2.0);
    }

    #[test]
    fn boundary_branch() {
        let m = uniform_box([1.0; 3], [1, 1, 1]).unwrap();
        let w = [3.0];
        for f in 0..6 {
            let tau = m.metrics(f).tau;
            assert_eq!(face_flux(&m, &w, &BoundaryValue::Zero, 0.0, f, 0), tau * 3.0);
            assert_eq!(face_flux(&m, &w, &BoundaryValue::Constant(3.0), 0.0, f, 0), 0.0);
        }
    }

    #[test]
    fn operator_matches_direct_sum() {
        let m = uniform_box([1.0, 0.5, 2.0], [3, 2, 4]).unwrap();
        let w: Vec<f64> = (0..m.n_cells()).map(|k| (k as f64 * 0.37).sin()).collect();
        let op = FluxOperator::new(&m);
        let data = BoundaryValue::Constant(0.3);
        let g = op.boundary_values(&data, 0.0);
        for k in 0..m.n_cells() {
            let direct = cell_flux(&m, &w, &data, 0.0, k) / m.cell(k).volume;
            assert!((op.divergence(&w, &g, k) - direct).abs() < 1e-12);
        }
    }
}
