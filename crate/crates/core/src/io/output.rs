//! On-disk artifacts: VTK snapshots, CSV tables and a hashed manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::analysis::{ConvergenceTable, EstimateLedger};
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::run::Snapshot;

const VTK_HEXAHEDRON: u8 = 12;
const VTK_POLYHEDRON: u8 = 42;

/// Vertex lists of the cells in VTK hexahedron order, if `mesh` is a
/// generated box mesh.
fn hex_connectivity(mesh: &Mesh) -> Option<Vec<[usize; 8]>> {
    let grid = mesh.grid()?;
    let [nx, ny, nz] = grid.dims();
    let vid = |i: usize, j: usize, k: usize| i + (nx + 1) * (j + (ny + 1) * k);
    let mut out = Vec::with_capacity(nx * ny * nz);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                out.push([
                    vid(i, j, k),
                    vid(i + 1, j, k),
                    vid(i + 1, j + 1, k),
                    vid(i, j + 1, k),
                    vid(i, j, k + 1),
                    vid(i + 1, j, k + 1),
                    vid(i + 1, j + 1, k + 1),
                    vid(i, j + 1, k + 1),
                ]);
            }
        }
    }
    Some(out)
}

/// Legacy ASCII unstructured grid with cell scalars `u` and `p`.
pub fn vtk_string(mesh: &Mesh, u: &[f64], p: &[f64], title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# vtk DataFile Version 4.2");
    let _ = writeln!(s, "{}", title.replace('\n', " "));
    let _ = writeln!(s, "ASCII");
    let _ = writeln!(s, "DATASET UNSTRUCTURED_GRID");
    let _ = writeln!(s, "POINTS {} double", mesh.n_vertices());
    for v in mesh.vertices() {
        let _ = writeln!(s, "{:?} {:?} {:?}", v[0], v[1], v[2]);
    }
    let n = mesh.n_cells();
    let (cells, kind): (Vec<Vec<usize>>, u8) = match hex_connectivity(mesh) {
        Some(h) => (h.into_iter().map(|c| c.to_vec()).collect(), VTK_HEXAHEDRON),
        None => {
            let cells = (0..n)
                .map(|k| {
                    let faces = mesh.cell_faces(k);
                    let mut rec = vec![faces.len()];
                    for &f in faces {
                        let mut vs = mesh.face_vertices(f).to_vec();
                        // VTK expects outward orientation
                        if mesh.face(f).owner != k {
                            vs.reverse();
                        }
                        rec.push(vs.len());
                        rec.extend(vs);
                    }
                    rec
                })
                .collect();
            (cells, VTK_POLYHEDRON)
        }
    };
    let size: usize = cells.iter().map(|c| c.len() + 1).sum();
    let _ = writeln!(s, "CELLS {n} {size}");
    for c in &cells {
        let _ = write!(s, "{}", c.len());
        for v in c {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "CELL_TYPES {n}");
    for _ in 0..n {
        let _ = writeln!(s, "{kind}");
    }
    let _ = writeln!(s, "CELL_DATA {n}");
    for (name, values) in [("u", u), ("p", p)] {
        let _ = writeln!(s, "SCALARS {name} double 1");
        let _ = writeln!(s, "LOOKUP_TABLE default");
        for v in values {
            let _ = writeln!(s, "{v:?}");
        }
    }
    s
}

/// Files written to one directory, with their SHA-256 digests.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Manifest {
    pub entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (name, hash) in &self.entries {
            let _ = writeln!(s, "{hash}  {name}");
        }
        s
    }

    /// Parses `manifest.txt` content back into entries.
    pub fn parse(text: &str) -> Option<Self> {
        let entries = text
            .lines()
            .map(|l| {
                let (h, n) = l.split_once("  ")?;
                Some((n.to_string(), h.to_string()))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Manifest { entries })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Everything a run or study may emit.
#[derive(Default)]
pub struct Artifacts<'a> {
    pub mesh: Option<&'a Mesh>,
    pub snapshots: &'a [Snapshot],
    pub ledger: Option<&'a EstimateLedger>,
    pub table: Option<&'a ConvergenceTable>,
    /// Extra text files `(name, content)`, e.g. the resolved configuration.
    pub extra: Vec<(String, String)>,
}

pub fn snapshot_name(step: usize) -> String {
    format!("snapshot_{step:06}.vtk")
}

/// Writes all artifacts plus `manifest.txt` into `dir`.
pub fn write_outputs(dir: &Path, artifacts: &Artifacts) -> Result<Manifest> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files: Vec<(String, String)> = Vec::new();
    if let Some(mesh) = artifacts.mesh {
        for snap in artifacts.snapshots {
            let title = format!("pfvm t={:e} step={}", snap.state.t, snap.step);
            files.push((snapshot_name(snap.step), vtk_string(mesh, &snap.state.u, &snap.state.p, &title)));
        }
    }
    if let Some(ledger) = artifacts.ledger {
        files.push(("ledger.csv".into(), ledger.to_csv()));
    }
    if let Some(table) = artifacts.table {
        files.push(("study.csv".into(), table.to_csv()));
    }
    files.extend(artifacts.extra.iter().cloned());
    files.sort();
    let mut manifest = Manifest::default();
    for (name, content) in &files {
        let path: PathBuf = dir.join(name);
        std::fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
        manifest.entries.push((name.clone(), sha256_hex(content.as_bytes())));
    }
    let path = dir.join("manifest.txt");
    std::fs::write(&path, manifest.to_text()).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}
