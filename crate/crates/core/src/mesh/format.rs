//! PFVM-MESH v1 text format.
//!
//! ```text
//! PFVM-MESH 1
//! counts <nVertices> <nFaces> <nCells>
//! v <x> <y> <z>                                  (nVertices lines)
//! f <n> <i1 ... in> <owner> <neighbor|-1>        (nFaces lines)
//! c <x_K> <y_K> <z_K>                            (nCells lines)
//! ```
//!
//! `#` starts a comment that runs to the end of the line; blank lines are
//! ignored. Indices are 0-based.

use std::fmt::Write as _;
use std::path::Path;

use super::{FaceSpec, Mesh};
use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Maximum vertex distance from a face's plane, relative to the face diameter.
pub const DEFAULT_PLANARITY_TOL: f64 = 1e-9;

/// Reads and parses a mesh file.
pub fn load_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_named(&text, &path.display().to_string(), DEFAULT_PLANARITY_TOL)
}

/// Parses mesh text; `planarity_tol` is relative to each face's diameter.
pub fn parse_mesh(text: &str, planarity_tol: f64) -> Result<Mesh> {
    parse_named(text, "<input>", planarity_tol)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    name: &'a str,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next_record(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            let body = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = body.split_whitespace().collect();
            self.last = i + 1;
            if !toks.is_empty() {
                return Ok((i + 1, toks));
            }
        }
        Err(self.err(self.last + 1, format!("unexpected end of input, expected {what}")))
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.name.to_string(),
            line,
            msg: msg.into(),
        }
    }
}

fn parse_named(text: &str, name: &str, planarity_tol: f64) -> Result<Mesh> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        name,
        last: 0,
    };

    let (ln, toks) = lines.next_record("header")?;
    if toks != ["PFVM-MESH", "1"] {
        return Err(lines.err(ln, "expected header `PFVM-MESH 1`"));
    }
    let (ln, toks) = lines.next_record("counts line")?;
    if toks.len() != 4 || toks[0] != "counts" {
        return Err(lines.err(ln, "expected `counts <nVertices> <nFaces> <nCells>`"));
    }
    let count = |s: &str| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| lines.err(ln, format!("invalid count `{s}`")))
    };
    let (nv, nf, nc) = (count(toks[1])?, count(toks[2])?, count(toks[3])?);
    if nc == 0 {
        return Err(Error::input("mesh has no cells"));
    }
    // guard preallocation against absurd counts in hostile input
    let cap = |n: usize| n.min(text.len() / 2 + 1);

    let mut vertices = Vec::with_capacity(cap(nv));
    for _ in 0..nv {
        let (ln, toks) = lines.next_record("vertex record")?;
        vertices.push(parse_point(&lines, ln, &toks, "v")?);
    }

    let mut faces = Vec::with_capacity(cap(nf));
    for _ in 0..nf {
        let (ln, toks) = lines.next_record("face record")?;
        if toks[0] != "f" {
            return Err(lines.err(ln, format!("expected face record `f`, found `{}`", toks[0])));
        }
        let n: usize = toks
            .get(1)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| lines.err(ln, "face record needs a vertex count"))?;
        if toks.len() != n.saturating_add(4) {
            return Err(lines.err(
                ln,
                format!("face with {n} vertices needs {} fields, found {}", n.saturating_add(4), toks.len()),
            ));
        }
        let idx = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|_| lines.err(ln, format!("invalid index `{s}`")))
        };
        let verts = toks[2..2 + n].iter().map(|s| idx(s)).collect::<Result<Vec<_>>>()?;
        let owner = idx(toks[2 + n])?;
        let neighbor = match toks[3 + n] {
            "-1" => None,
            s => Some(idx(s)?),
        };
        faces.push(FaceSpec {
            vertices: verts,
            owner,
            neighbor,
        });
    }

    let mut points = Vec::with_capacity(cap(nc));
    for _ in 0..nc {
        let (ln, toks) = lines.next_record("cell record")?;
        points.push(parse_point(&lines, ln, &toks, "c")?);
    }
    if let Ok((ln, _)) = lines.next_record("") {
        return Err(lines.err(ln, "trailing records after the declared counts"));
    }

    Mesh::from_parts(vertices, faces, points, planarity_tol)
}

fn parse_point(lines: &Lines, ln: usize, toks: &[&str], tag: &str) -> Result<Vec3> {
    if toks[0] != tag {
        return Err(lines.err(ln, format!("expected `{tag}` record, found `{}`", toks[0])));
    }
    if toks.len() != 4 {
        return Err(lines.err(ln, format!("`{tag}` record needs three coordinates")));
    }
    let mut p = [0.0; 3];
    for (a, s) in toks[1..].iter().enumerate() {
        let v: f64 = s
            .parse()
            .map_err(|_| lines.err(ln, format!("invalid number `{s}`")))?;
        if !v.is_finite() {
            return Err(lines.err(ln, format!("non-finite number `{s}`")));
        }
        p[a] = v;
    }
    Ok(p)
}

/// Serializes a mesh; floats use shortest round-trip formatting so
/// `parse_mesh(write_mesh(m))` reproduces `m` bit for bit.
pub fn write_mesh(mesh: &Mesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "PFVM-MESH 1");
    let _ = writeln!(s, "counts {} {} {}", mesh.n_vertices(), mesh.n_faces(), mesh.n_cells());
    for v in mesh.vertices() {
        let _ = writeln!(s, "v {:?} {:?} {:?}", v[0], v[1], v[2]);
    }
    for f in 0..mesh.n_faces() {
        let vs = mesh.face_vertices(f);
        let _ = write!(s, "f {}", vs.len());
        for v in vs {
            let _ = write!(s, " {v}");
        }
        let face = mesh.face(f);
        match face.neighbor {
            Some(l) => {
                let _ = writeln!(s, " {} {l}", face.owner);
            }
            None => {
                let _ = writeln!(s, " {} -1", face.owner);
            }
        }
    }
    for c in mesh.cells() {
        let _ = writeln!(s, "c {:?} {:?} {:?}", c.center[0], c.center[1], c.center[2]);
    }
    s
}
