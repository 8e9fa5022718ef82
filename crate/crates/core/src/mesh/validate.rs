//! Checks of the five admissibility conditions.

use std::collections::HashMap;
use std::fmt;

use super::Mesh;
use crate::geometry::{cross, dot, norm, sub};

/// Default relative tolerance (and angle tolerance in radians).
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entity {
    Mesh,
    Cell(usize),
    Face(usize),
    CellPair(usize, usize),
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entity::Mesh => write!(f, "mesh"),
            Entity::Cell(k) => write!(f, "cell {k}"),
            Entity::Face(s) => write!(f, "face {s}"),
            Entity::CellPair(k, l) => write!(f, "cells {k},{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub entity: Entity,
    pub what: String,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub condition: u8,
    pub name: &'static str,
    pub violations: Vec<Violation>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub tolerance: f64,
    pub conditions: Vec<ConditionReport>,
    /// Cells whose significant point lies on the cell boundary (accepted).
    pub boundary_incident: Vec<usize>,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(ConditionReport::passed)
    }

    pub fn condition(&self, c: u8) -> &ConditionReport {
        &self.conditions[usize::from(c) - 1]
    }

    /// Violations of a condition, deduplicated per entity and sorted.
    pub fn offending(&self, c: u8) -> Vec<Entity> {
        let mut e: Vec<Entity> = self.condition(c).violations.iter().map(|v| v.entity).collect();
        e.sort_by_key(|e| format!("{e:?}"));
        e.dedup();
        e
    }
}

impl fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tolerance {:e}", self.tolerance)?;
        for c in &self.conditions {
            let status = if c.passed() { "pass" } else { "FAIL" };
            writeln!(f, "condition {} ({}): {status}", c.condition, c.name)?;
            for v in c.violations.iter().take(20) {
                writeln!(f, "  {}: {} ({:.3e})", v.entity, v.what, v.magnitude)?;
            }
            if c.violations.len() > 20 {
                writeln!(f, "  ... {} more", c.violations.len() - 20)?;
            }
        }
        if !self.boundary_incident.is_empty() {
            writeln!(
                f,
                "note: {} significant point(s) on their cell boundary",
                self.boundary_incident.len()
            )?;
        }
        write!(f, "overall: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

/// Evaluates admissibility conditions 1 to 5. `tol` is relative to the
/// relevant length/volume scale; angles are compared to `tol` radians.
pub fn validate_admissibility(mesh: &Mesh, tol: f64) -> AdmissibilityReport {
    let radii: Vec<f64> = (0..mesh.n_cells()).map(|k| mesh.cell_radius(k)).collect();
    let conditions = vec![
        ConditionReport {
            condition: 1,
            name: "cells partition the domain",
            violations: check_partition(mesh, tol),
        },
        ConditionReport {
            condition: 2,
            name: "cell boundaries are unions of faces",
            violations: check_cell_closure(mesh, tol, &radii),
        },
        ConditionReport {
            condition: 3,
            name: "cells share at most one face",
            violations: check_shared_faces(mesh, tol, &radii),
        },
        ConditionReport {
            condition: 4,
            name: "significant point in cell closure",
            violations: check_points(mesh, tol, &radii),
        },
        ConditionReport {
            condition: 5,
            name: "orthogonality",
            violations: check_orthogonality(mesh, tol),
        },
    ];
    let boundary_incident = (0..mesh.n_cells())
        .filter(|&k| {
            let x = mesh.cell(k).center;
            mesh.cell_faces(k)
                .iter()
                .any(|&f| mesh.signed_distance(f, k, x).abs() <= tol * radii[k])
        })
        .collect();
    AdmissibilityReport {
        tolerance: tol,
        conditions,
        boundary_incident,
    }
}

fn check_partition(mesh: &Mesh, tol: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    for (k, c) in mesh.cells().iter().enumerate() {
        if !(c.volume > 0.0) {
            out.push(Violation {
                entity: Entity::Cell(k),
                what: "non-positive volume".into(),
                magnitude: c.volume,
            });
        }
    }
    let omega = mesh.domain_volume();
    let total: f64 = mesh.cells().iter().map(|c| c.volume).sum();
    let gap = (total - omega).abs();
    if !(gap <= tol * omega.abs().max(f64::MIN_POSITIVE)) {
        out.push(Violation {
            entity: Entity::Mesh,
            what: "sum of cell volumes differs from the enclosed volume".into(),
            magnitude: gap,
        });
    }
    // boundary surface must be closed and consistently oriented
    let mut edges: HashMap<(usize, usize), i64> = HashMap::new();
    for f in mesh.boundary_faces() {
        let vs = mesh.face_vertices(f);
        for i in 0..vs.len() {
            let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
            *edges.entry((a, b)).or_default() += 1;
        }
    }
    let open = edges
        .iter()
        .filter(|(&(a, b), &n)| edges.get(&(b, a)).copied().unwrap_or(0) != n)
        .count();
    if open > 0 {
        out.push(Violation {
            entity: Entity::Mesh,
            what: "boundary surface is not closed".into(),
            magnitude: open as f64,
        });
    }
    out
}

fn check_cell_closure(mesh: &Mesh, tol: f64, radii: &[f64]) -> Vec<Violation> {
    let mut out = Vec::new();
    for k in 0..mesh.n_cells() {
        let faces = mesh.cell_faces(k);
        if faces.len() < 4 {
            out.push(Violation {
                entity: Entity::Cell(k),
                what: "fewer than four faces".into(),
                magnitude: faces.len() as f64,
            });
        }
        // outward-oriented directed edges must pair up
        let mut edges: HashMap<(usize, usize), i64> = HashMap::new();
        for &f in faces {
            let vs = mesh.face_vertices(f);
            let n = vs.len();
            for i in 0..n {
                let (a, b) = (vs[i], vs[(i + 1) % n]);
                let key = if mesh.face(f).owner == k { (a, b) } else { (b, a) };
                *edges.entry(key).or_default() += 1;
            }
        }
        let open = edges
            .iter()
            .filter(|(&(a, b), &n)| edges.get(&(b, a)).copied().unwrap_or(0) != n)
            .count();
        if open > 0 {
            out.push(Violation {
                entity: Entity::Cell(k),
                what: "faces do not close the cell".into(),
                magnitude: open as f64,
            });
        }
        // convexity: every vertex on the inner side of every face plane
        let slack = tol * radii[k];
        let verts = mesh.cell_vertices(k);
        let worst = faces
            .iter()
            .flat_map(|&f| {
                verts
                    .iter()
                    .map(move |&v| mesh.signed_distance(f, k, mesh.vertices()[v]))
            })
            .fold(f64::NEG_INFINITY, f64::max);
        if worst > slack {
            out.push(Violation {
                entity: Entity::Cell(k),
                what: "cell is not convex".into(),
                magnitude: worst / radii[k],
            });
        }
    }
    out
}

fn check_shared_faces(mesh: &Mesh, tol: f64, radii: &[f64]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
    for f in mesh.interior_faces() {
        let face = mesh.face(f);
        let l = face.neighbor.unwrap();
        let key = (face.owner.min(l), face.owner.max(l));
        *pairs.entry(key).or_default() += 1;
        for cell in [face.owner, l] {
            let slack = tol * radii[cell];
            let excess = mesh
                .face_vertices(f)
                .iter()
                .flat_map(|&v| {
                    let x = mesh.vertices()[v];
                    mesh.cell_faces(cell)
                        .iter()
                        .map(move |&g| mesh.signed_distance(g, cell, x))
                })
                .fold(f64::NEG_INFINITY, f64::max);
            if excess > slack {
                out.push(Violation {
                    entity: Entity::Face(f),
                    what: format!("face extends beyond cell {cell}"),
                    magnitude: excess / radii[cell],
                });
            }
        }
    }
    let mut dup: Vec<_> = pairs.into_iter().filter(|&(_, n)| n > 1).collect();
    dup.sort_unstable();
    for ((k, l), n) in dup {
        out.push(Violation {
            entity: Entity::CellPair(k, l),
            what: "cells share more than one face".into(),
            magnitude: n as f64,
        });
    }
    out
}

fn check_points(mesh: &Mesh, tol: f64, radii: &[f64]) -> Vec<Violation> {
    let mut out = Vec::new();
    for k in 0..mesh.n_cells() {
        let x = mesh.cell(k).center;
        let worst = mesh
            .cell_faces(k)
            .iter()
            .map(|&f| mesh.signed_distance(f, k, x))
            .fold(f64::NEG_INFINITY, f64::max);
        if worst > tol * radii[k] {
            out.push(Violation {
                entity: Entity::Cell(k),
                what: "significant point outside the cell".into(),
                magnitude: worst / radii[k],
            });
        }
    }
    out
}

fn check_orthogonality(mesh: &Mesh, tol: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    for f in 0..mesh.n_faces() {
        let face = mesh.face(f);
        let m = mesh.metrics(f);
        if !(m.tau > 0.0 && m.tau.is_finite()) {
            out.push(Violation {
                entity: Entity::Face(f),
                what: "transmissibility is not positive".into(),
                magnitude: m.tau,
            });
        }
        let Some(l) = face.neighbor else { continue };
        let seg = sub(mesh.cell(l).center, mesh.cell(face.owner).center);
        let angle = norm(cross(seg, face.normal)).atan2(dot(seg, face.normal));
        if !(angle <= tol) {
            out.push(Violation {
                entity: Entity::Face(f),
                what: "segment between significant points is not orthogonal".into(),
                magnitude: angle,
            });
        }
        let split = (m.d_sigma - m.d_owner - m.d_neighbor).abs();
        if !(split <= tol * m.d_sigma) {
            out.push(Violation {
                entity: Entity::Face(f),
                what: "distance does not split across the face".into(),
                magnitude: split,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_box_mesh, uniform_box};

    #[test]
    fn uniform_box_passes() {
        let m = uniform_box([1.0; 3], [4, 4, 4]).unwrap();
        let r = validate_admissibility(&m, DEFAULT_TOLERANCE);
        assert!(r.passed(), "{r}");
        assert!(r.boundary_incident.is_empty());
    }

    #[test]
    fn graded_box_passes() {
        let m = generate_box_mesh([vec![0.0, 0.25, 1.0], vec![0.0, 0.5, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(validate_admissibility(&m, DEFAULT_TOLERANCE).passed());
    }

    #[test]
    fn displaced_point_breaks_orthogonality_only_nearby() {
        let m = uniform_box([1.0; 3], [4, 4, 4]).unwrap();
        let k = m.grid().unwrap().cell_index(1, 1, 1);
        let mut pts = m.significant_points();
        pts[k][1] += 0.1 * 0.25;
        let moved = m.with_significant_points(pts).unwrap();
        let r = validate_admissibility(&moved, DEFAULT_TOLERANCE);
        assert!(!r.condition(5).passed());
        for e in r.offending(5) {
            let Entity::Face(f) = e else { panic!("{e:?}") };
            let face = moved.face(f);
            assert!(face.owner == k || face.neighbor == Some(k));
        }
        assert!(r.condition(4).passed());
    }
}
