use super::Mesh;
use crate::geometry::min_enclosing_ball;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshMetrics {
    pub n_cells: usize,
    pub n_faces: usize,
    pub n_interior_faces: usize,
    pub domain_volume: f64,
    /// `sum m(sigma) d_sigma - 3 m(Omega)`; zero for admissible meshes.
    pub pyramid_residual: f64,
    /// Largest smallest-enclosing-ball radius over all cells.
    pub mesh_norm: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    pub volume_min: f64,
    pub volume_max: f64,
}

pub fn mesh_metrics(mesh: &Mesh) -> MeshMetrics {
    let pyramid: f64 = mesh
        .faces()
        .iter()
        .zip(mesh.face_metrics())
        .map(|(f, m)| f.area * m.d_sigma)
        .sum();
    let mesh_norm = (0..mesh.n_cells())
        .map(|k| {
            let pts: Vec<_> = mesh
                .cell_vertices(k)
                .into_iter()
                .map(|v| mesh.vertices()[v])
                .collect();
            min_enclosing_ball(&pts).radius
        })
        .fold(0.0, f64::max);
    let taus = mesh.face_metrics().iter().map(|m| m.tau);
    let vols = mesh.cells().iter().map(|c| c.volume);
    MeshMetrics {
        n_cells: mesh.n_cells(),
        n_faces: mesh.n_faces(),
        n_interior_faces: mesh.interior_faces().count(),
        domain_volume: mesh.domain_volume(),
        pyramid_residual: pyramid - 3.0 * mesh.domain_volume(),
        mesh_norm,
        tau_min: taus.clone().fold(f64::INFINITY, f64::min),
        tau_max: taus.fold(f64::NEG_INFINITY, f64::max),
        volume_min: vols.clone().fold(f64::INFINITY, f64::min),
        volume_max: vols.fold(f64::NEG_INFINITY, f64::max),
    }
}
