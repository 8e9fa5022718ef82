use crate::mesh::Mesh;

/// Bipyramid over an interior face (apexes `x_K`, `x_L`) or pyramid over a
/// boundary face (apex `x_K`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualCell {
    pub face: usize,
    pub owner: usize,
    pub neighbor: Option<usize>,
    pub area: f64,
    pub d_owner: f64,
    pub d_neighbor: f64,
    pub volume: f64,
}

/// One dual cell per face, indexed like the faces.
#[derive(Debug, Clone, PartialEq)]
pub struct DualMesh {
    pub cells: Vec<DualCell>,
}

impl DualMesh {
    pub fn total_volume(&self) -> f64 {
        self.cells.iter().map(|c| c.volume).sum()
    }

    pub fn interior(&self) -> impl Iterator<Item = &DualCell> {
        self.cells.iter().filter(|c| c.neighbor.is_some())
    }

    pub fn boundary(&self) -> impl Iterator<Item = &DualCell> {
        self.cells.iter().filter(|c| c.neighbor.is_none())
    }
}

pub fn build_dual(mesh: &Mesh) -> DualMesh {
    let cells = mesh
        .faces()
        .iter()
        .zip(mesh.face_metrics())
        .enumerate()
        .map(|(f, (face, m))| {
            let d_neighbor = if face.neighbor.is_some() { m.d_neighbor } else { 0.0 };
            DualCell {
                face: f,
                owner: face.owner,
                neighbor: face.neighbor,
                area: face.area,
                d_owner: m.d_owner,
                d_neighbor,
                volume: face.area * (m.d_owner + d_neighbor) / 3.0,
            }
        })
        .collect();
    DualMesh { cells }
}
