use super::{BoxGrid, FaceSpec, Mesh};
use crate::error::{Error, Result};

/// Evenly spaced coordinate lines `0, l/n, ..., l`.
pub fn uniform_coords(length: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| length * i as f64 / n as f64).collect()
}

/// Inserts the midpoint of every interval (one uniform refinement step).
pub fn refine_coords(coords: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * coords.len() - 1);
    for w in coords.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.extend(coords.last());
    out
}

/// Uniform `n[0] x n[1] x n[2]` hexahedral mesh of `[0,l0]x[0,l1]x[0,l2]`.
pub fn uniform_box(extents: [f64; 3], n: [usize; 3]) -> Result<Mesh> {
    generate_box_mesh([
        uniform_coords(extents[0], n[0]),
        uniform_coords(extents[1], n[1]),
        uniform_coords(extents[2], n[2]),
    ])
}

/// Rectilinear hexahedral mesh on the tensor grid given by three strictly
/// increasing coordinate lists. Significant points are cell centers, so the
/// result is admissible.
///
/// Cells are numbered `i + nx*(j + ny*k)`. Faces normal to x come first, then
/// y, then z; interior faces are owned by the cell with the lower index.
pub fn generate_box_mesh(coords: [Vec<f64>; 3]) -> Result<Mesh> {
    for (a, c) in coords.iter().enumerate() {
        if c.len() < 2 {
            return Err(Error::input(format!(
                "axis {a} needs at least two coordinates, got {}",
                c.len()
            )));
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::input(format!("axis {a} has a non-finite coordinate")));
        }
        if c.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::input(format!(
                "axis {a} coordinates are not strictly increasing"
            )));
        }
    }
    let [nx, ny, nz] = [coords[0].len() - 1, coords[1].len() - 1, coords[2].len() - 1];
    let vid = |i: usize, j: usize, k: usize| i + (nx + 1) * (j + (ny + 1) * k);
    let cid = |i: usize, j: usize, k: usize| i + nx * (j + ny * k);

    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1) * (nz + 1));
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                vertices.push([coords[0][i], coords[1][j], coords[2][k]]);
            }
        }
    }

    let mut faces = Vec::with_capacity((nx + 1) * ny * nz + nx * (ny + 1) * nz + nx * ny * (nz + 1));
    // `lo_hi` gives the owner/neighbor for a face at grid position `p` along an
    // axis of `n` cells, and whether the stored loop must be reversed.
    let side = |p: usize, n: usize, cell: &dyn Fn(usize) -> usize| -> (usize, Option<usize>, bool) {
        if p == 0 {
            (cell(0), None, true)
        } else if p == n {
            (cell(n - 1), None, false)
        } else {
            (cell(p - 1), Some(cell(p)), false)
        }
    };
    let mut push = |mut loop_: Vec<usize>, (owner, neighbor, flip): (usize, Option<usize>, bool)| {
        if flip {
            loop_.reverse();
        }
        faces.push(FaceSpec {
            vertices: loop_,
            owner,
            neighbor,
        });
    };

    for k in 0..nz {
        for j in 0..ny {
            for i in 0..=nx {
                let quad = vec![vid(i, j, k), vid(i, j + 1, k), vid(i, j + 1, k + 1), vid(i, j, k + 1)];
                push(quad, side(i, nx, &|p| cid(p, j, k)));
            }
        }
    }
    for k in 0..nz {
        for j in 0..=ny {
            for i in 0..nx {
                let quad = vec![vid(i, j, k), vid(i, j, k + 1), vid(i + 1, j, k + 1), vid(i + 1, j, k)];
                push(quad, side(j, ny, &|p| cid(i, p, k)));
            }
        }
    }
    for k in 0..=nz {
        for j in 0..ny {
            for i in 0..nx {
                let quad = vec![vid(i, j, k), vid(i + 1, j, k), vid(i + 1, j + 1, k), vid(i, j + 1, k)];
                push(quad, side(k, nz, &|p| cid(i, j, p)));
            }
        }
    }

    let mut centers = Vec::with_capacity(nx * ny * nz);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                centers.push([
                    0.5 * (coords[0][i] + coords[0][i + 1]),
                    0.5 * (coords[1][j] + coords[1][j + 1]),
                    0.5 * (coords[2][k] + coords[2][k + 1]),
                ]);
            }
        }
    }

    let mesh = Mesh::from_parts(vertices, faces, centers, super::DEFAULT_PLANARITY_TOL)?;
    Ok(mesh.with_grid(BoxGrid { coords }))
}
