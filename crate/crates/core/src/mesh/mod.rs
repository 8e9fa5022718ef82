//! Admissible polyhedral meshes.
//!
//! A [`Mesh`] stores vertices, oriented planar faces (owner cell on the
//! negative side of the normal, optional neighbor on the positive side) and
//! one significant point per cell. All geometric quantities the scheme and
//! the estimates consume are computed once at construction and are read-only
//! afterwards.

mod boxes;
mod format;
mod metrics;
mod validate;

pub use boxes::{generate_box_mesh, refine_coords, uniform_box, uniform_coords};
pub use format::{load_mesh, parse_mesh, write_mesh, DEFAULT_PLANARITY_TOL};
pub use metrics::{mesh_metrics, MeshMetrics};
pub use validate::{
    validate_admissibility, AdmissibilityReport, ConditionReport, Entity, Violation,
    DEFAULT_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::geometry::{self, add, dot, newell_normal, norm, polygon_centroid, scale, sub, Vec3};

/// Raw face record as it appears in a mesh file: vertex loop plus adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceSpec {
    pub vertices: Vec<usize>,
    pub owner: usize,
    pub neighbor: Option<usize>,
}

/// Per-face distances: `d_sigma` is the distance between significant points
/// (or the owner's distance to the face on the boundary), `d_owner` and
/// `d_neighbor` the signed per-side distances to the face plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceMetrics {
    pub d_sigma: f64,
    pub d_owner: f64,
    pub d_neighbor: f64,
    pub tau: f64,
    /// Foot of the orthogonal segment from the owner's significant point.
    pub foot: Vec3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub owner: usize,
    pub neighbor: Option<usize>,
    pub area: f64,
    /// Unit normal pointing from the owner toward the neighbor (outward on
    /// the boundary).
    pub normal: Vec3,
    pub centroid: Vec3,
    /// Largest distance of a vertex from the best-fit plane.
    pub planarity: f64,
}

impl Face {
    pub fn is_boundary(&self) -> bool {
        self.neighbor.is_none()
    }

    /// The cell on the other side of the face as seen from `cell`.
    pub fn other(&self, cell: usize) -> Option<usize> {
        if self.owner == cell {
            self.neighbor
        } else {
            Some(self.owner)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub volume: f64,
    /// Significant point `x_K`.
    pub center: Vec3,
}

/// Coordinate lines of a rectilinear box mesh; enables O(log n) point location.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxGrid {
    pub coords: [Vec<f64>; 3],
}

impl BoxGrid {
    pub fn dims(&self) -> [usize; 3] {
        [
            self.coords[0].len() - 1,
            self.coords[1].len() - 1,
            self.coords[2].len() - 1,
        ]
    }

    pub fn cell_index(&self, i: usize, j: usize, k: usize) -> usize {
        let [nx, ny, _] = self.dims();
        i + nx * (j + ny * k)
    }

    fn locate(&self, x: Vec3) -> Option<usize> {
        let mut idx = [0usize; 3];
        for a in 0..3 {
            let c = &self.coords[a];
            let (lo, hi) = (c[0], *c.last().unwrap());
            if !(x[a] >= lo && x[a] <= hi) {
                return None;
            }
            // lowest interval whose closure contains the coordinate
            let pos = c.partition_point(|&v| v < x[a]);
            idx[a] = pos.saturating_sub(1).min(c.len() - 2);
        }
        Some(self.cell_index(idx[0], idx[1], idx[2]))
    }
}

#[derive(Debug, Clone)]
pub struct Mesh {
    vertices: Vec<Vec3>,
    face_vertex_offsets: Vec<usize>,
    face_vertex_indices: Vec<usize>,
    faces: Vec<Face>,
    metrics: Vec<FaceMetrics>,
    cell_face_offsets: Vec<usize>,
    cell_face_indices: Vec<usize>,
    cells: Vec<Cell>,
    links: Vec<FaceLink>,
    domain_volume: f64,
    grid: Option<BoxGrid>,
}

/// Compact `(owner, neighbor, τ)` record for fast face loops; `neighbor` is
/// `usize::MAX` on the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct FaceLink {
    pub owner: usize,
    pub neighbor: usize,
    pub tau: f64,
}

impl Mesh {
    /// Builds a mesh from raw records, checking references and face planarity
    /// (relative to each face's diameter). Admissibility is not checked here;
    /// see [`validate_admissibility`].
    pub fn from_parts(
        vertices: Vec<Vec3>,
        faces: Vec<FaceSpec>,
        significant_points: Vec<Vec3>,
        planarity_tol: f64,
    ) -> Result<Self> {
        let n_cells = significant_points.len();
        if n_cells == 0 {
            return Err(Error::input("mesh has no cells"));
        }
        if faces.is_empty() {
            return Err(Error::input("mesh has no faces"));
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::input(format!("vertex {i} has a non-finite coordinate")));
            }
        }
        for (k, x) in significant_points.iter().enumerate() {
            if x.iter().any(|c| !c.is_finite()) {
                return Err(Error::input(format!(
                    "significant point of cell {k} has a non-finite coordinate"
                )));
            }
        }

        let mut face_vertex_offsets = Vec::with_capacity(faces.len() + 1);
        let mut face_vertex_indices = Vec::new();
        face_vertex_offsets.push(0);
        let mut cell_face_count = vec![0usize; n_cells];
        for (f, spec) in faces.iter().enumerate() {
            if spec.vertices.len() < 3 {
                return Err(Error::input(format!(
                    "face {f} has {} vertices, need at least 3",
                    spec.vertices.len()
                )));
            }
            for &v in &spec.vertices {
                if v >= vertices.len() {
                    return Err(Error::Reference(format!(
                        "face {f} references vertex {v}, mesh has {}",
                        vertices.len()
                    )));
                }
            }
            if spec.owner >= n_cells {
                return Err(Error::Reference(format!(
                    "face {f} references owner cell {}, mesh has {n_cells}",
                    spec.owner
                )));
            }
            if let Some(nb) = spec.neighbor {
                if nb >= n_cells {
                    return Err(Error::Reference(format!(
                        "face {f} references neighbor cell {nb}, mesh has {n_cells}"
                    )));
                }
                if nb == spec.owner {
                    return Err(Error::Reference(format!(
                        "face {f} has cell {nb} as both owner and neighbor"
                    )));
                }
                cell_face_count[nb] += 1;
            }
            cell_face_count[spec.owner] += 1;
            face_vertex_indices.extend_from_slice(&spec.vertices);
            face_vertex_offsets.push(face_vertex_indices.len());
        }
        if let Some(k) = cell_face_count.iter().position(|&c| c == 0) {
            return Err(Error::Reference(format!("cell {k} is not referenced by any face")));
        }

        let mut cell_face_offsets = Vec::with_capacity(n_cells + 1);
        cell_face_offsets.push(0);
        for c in &cell_face_count {
            cell_face_offsets.push(cell_face_offsets.last().unwrap() + c);
        }
        let mut fill = cell_face_offsets[..n_cells].to_vec();
        let mut cell_face_indices = vec![0usize; *cell_face_offsets.last().unwrap()];
        for (f, spec) in faces.iter().enumerate() {
            cell_face_indices[fill[spec.owner]] = f;
            fill[spec.owner] += 1;
            if let Some(nb) = spec.neighbor {
                cell_face_indices[fill[nb]] = f;
                fill[nb] += 1;
            }
        }

        let mut built_faces = Vec::with_capacity(faces.len());
        for (f, spec) in faces.iter().enumerate() {
            let poly: Vec<Vec3> = spec.vertices.iter().map(|&v| vertices[v]).collect();
            let nw = newell_normal(&poly);
            let len = norm(nw);
            let diam = poly
                .iter()
                .flat_map(|a| poly.iter().map(move |b| geometry::dist(*a, *b)))
                .fold(0.0_f64, f64::max);
            if len <= 1e-300 || diam <= 0.0 {
                return Err(Error::input(format!("face {f} is degenerate (zero area)")));
            }
            let normal = scale(nw, 1.0 / len);
            let (centroid, area) = polygon_centroid(&poly, normal);
            let planarity = poly
                .iter()
                .map(|p| dot(sub(*p, centroid), normal).abs())
                .fold(0.0_f64, f64::max);
            if planarity > planarity_tol * diam {
                return Err(Error::NonPlanarFace {
                    face: f,
                    deviation: planarity / diam,
                    tolerance: planarity_tol,
                });
            }
            built_faces.push(Face {
                owner: spec.owner,
                neighbor: spec.neighbor,
                area,
                normal,
                centroid,
                planarity,
            });
        }

        let mut mesh = Mesh {
            vertices,
            face_vertex_offsets,
            face_vertex_indices,
            faces: built_faces,
            metrics: Vec::new(),
            cell_face_offsets,
            cell_face_indices,
            cells: Vec::new(),
            links: Vec::new(),
            domain_volume: 0.0,
            grid: None,
        };
        mesh.cells = (0..n_cells)
            .map(|k| Cell {
                volume: mesh.polyhedron_volume(k),
                center: significant_points[k],
            })
            .collect();
        mesh.refresh_metrics();
        mesh.domain_volume = mesh.boundary_enclosed_volume();
        Ok(mesh)
    }

    fn refresh_metrics(&mut self) {
        self.metrics = (0..self.faces.len()).map(|f| self.face_metrics_of(f)).collect();
        self.links = self
            .faces
            .iter()
            .zip(&self.metrics)
            .map(|(f, m)| FaceLink {
                owner: f.owner,
                neighbor: f.neighbor.unwrap_or(usize::MAX),
                tau: m.tau,
            })
            .collect();
    }

    pub(crate) fn face_links(&self) -> &[FaceLink] {
        &self.links
    }

    pub(crate) fn with_grid(mut self, grid: BoxGrid) -> Self {
        self.grid = Some(grid);
        self
    }

    fn polyhedron_volume(&self, k: usize) -> f64 {
        let verts = self.cell_vertices(k);
        let pts: Vec<Vec3> = verts.iter().map(|&v| self.vertices[v]).collect();
        let origin = geometry::centroid(&pts);
        let mut vol = 0.0;
        for &f in self.cell_faces(k) {
            let face = &self.faces[f];
            let n = self.outward_normal(f, k);
            vol += dot(sub(face.centroid, origin), n) * face.area;
        }
        vol / 3.0
    }

    fn boundary_enclosed_volume(&self) -> f64 {
        let origin = geometry::centroid(&self.vertices);
        let vol: f64 = self
            .faces
            .iter()
            .filter(|f| f.is_boundary())
            .map(|f| dot(sub(f.centroid, origin), f.normal) * f.area)
            .sum();
        vol / 3.0
    }

    fn face_metrics_of(&self, f: usize) -> FaceMetrics {
        let face = &self.faces[f];
        let xk = self.cells[face.owner].center;
        let d_owner = dot(sub(face.centroid, xk), face.normal);
        let foot = add(xk, scale(face.normal, d_owner));
        match face.neighbor {
            Some(l) => {
                let xl = self.cells[l].center;
                let d_neighbor = dot(sub(xl, face.centroid), face.normal);
                let d_sigma = geometry::dist(xk, xl);
                FaceMetrics {
                    d_sigma,
                    d_owner,
                    d_neighbor,
                    tau: face.area / d_sigma,
                    foot,
                }
            }
            None => FaceMetrics {
                d_sigma: d_owner,
                d_owner,
                d_neighbor: 0.0,
                tau: face.area / d_owner,
                foot,
            },
        }
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn metrics(&self, f: usize) -> &FaceMetrics {
        &self.metrics[f]
    }

    pub fn face_metrics(&self) -> &[FaceMetrics] {
        &self.metrics
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, k: usize) -> &Cell {
        &self.cells[k]
    }

    /// Domain volume `m(Ω)`, measured from the boundary surface alone.
    pub fn domain_volume(&self) -> f64 {
        self.domain_volume
    }

    pub fn grid(&self) -> Option<&BoxGrid> {
        self.grid.as_ref()
    }

    pub fn face_vertices(&self, f: usize) -> &[usize] {
        &self.face_vertex_indices[self.face_vertex_offsets[f]..self.face_vertex_offsets[f + 1]]
    }

    /// Face set `E_K`, in increasing face index order.
    pub fn cell_faces(&self, k: usize) -> &[usize] {
        &self.cell_face_indices[self.cell_face_offsets[k]..self.cell_face_offsets[k + 1]]
    }

    /// Sorted, deduplicated vertex indices of a cell.
    pub fn cell_vertices(&self, k: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .cell_faces(k)
            .iter()
            .flat_map(|&f| self.face_vertices(f).iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Unit normal of face `f` pointing out of cell `k`.
    pub fn outward_normal(&self, f: usize, k: usize) -> Vec3 {
        let face = &self.faces[f];
        if face.owner == k {
            face.normal
        } else {
            scale(face.normal, -1.0)
        }
    }

    /// Signed distance from `x` to the plane of face `f`, positive outside cell `k`.
    pub fn signed_distance(&self, f: usize, k: usize, x: Vec3) -> f64 {
        dot(sub(x, self.faces[f].centroid), self.outward_normal(f, k))
    }

    pub fn interior_faces(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(|&f| !self.faces[f].is_boundary())
    }

    pub fn boundary_faces(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(|&f| self.faces[f].is_boundary())
    }

    /// Axis-aligned bounding box of all vertices.
    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in &self.vertices {
            for a in 0..3 {
                lo[a] = lo[a].min(v[a]);
                hi[a] = hi[a].max(v[a]);
            }
        }
        (lo, hi)
    }

    /// Largest vertex distance from the vertex mean, a length scale for tolerances.
    pub(crate) fn cell_radius(&self, k: usize) -> f64 {
        let verts = self.cell_vertices(k);
        let pts: Vec<Vec3> = verts.iter().map(|&v| self.vertices[v]).collect();
        let c = geometry::centroid(&pts);
        pts.iter().map(|p| geometry::dist(*p, c)).fold(0.0, f64::max)
    }

    /// Whether `x` lies in the closure of (convex) cell `k`, up to a relative slack.
    pub fn cell_contains(&self, k: usize, x: Vec3, rel_tol: f64) -> bool {
        let slack = rel_tol * self.cell_radius(k);
        self.cell_faces(k)
            .iter()
            .all(|&f| self.signed_distance(f, k, x) <= slack)
    }

    /// Index of the cell containing `x`; on shared boundaries the lowest
    /// cell index wins.
    pub fn locate(&self, x: Vec3) -> Option<usize> {
        if let Some(grid) = &self.grid {
            return grid.locate(x);
        }
        let (lo, hi) = self.bounding_box();
        let diag = geometry::dist(lo, hi);
        if (0..3).any(|a| x[a] < lo[a] - 1e-12 * diag || x[a] > hi[a] + 1e-12 * diag) {
            return None;
        }
        (0..self.cells.len()).find(|&k| self.cell_contains(k, x, 1e-12))
    }

    /// Returns a copy with the significant points replaced; face metrics
    /// are recomputed.
    pub fn with_significant_points(&self, points: Vec<Vec3>) -> Result<Self> {
        if points.len() != self.cells.len() {
            return Err(Error::MeshMismatch {
                expected: self.cells.len(),
                got: points.len(),
            });
        }
        let mut mesh = self.clone();
        for (cell, x) in mesh.cells.iter_mut().zip(points) {
            cell.center = x;
        }
        mesh.refresh_metrics();
        Ok(mesh)
    }

    /// The face records this mesh was built from.
    pub fn face_specs(&self) -> Vec<FaceSpec> {
        (0..self.faces.len())
            .map(|f| FaceSpec {
                vertices: self.face_vertices(f).to_vec(),
                owner: self.faces[f].owner,
                neighbor: self.faces[f].neighbor,
            })
            .collect()
    }

    pub fn significant_points(&self) -> Vec<Vec3> {
        self.cells.iter().map(|c| c.center).collect()
    }
}
