//! Gauss–Legendre rules on intervals, tetrahedra and polyhedral cells.

use crate::geometry::{add, centroid, cross, dot, scale, sub, Vec3};
use crate::mesh::Mesh;

/// `n`-point Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n > 0);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Collapsed-coordinate rule on the tetrahedron `v`, `n³` points.
pub fn tet_rule(v: [Vec3; 4], gl: &[(f64, f64)], out: &mut Vec<(Vec3, f64)>) {
    let e = [sub(v[1], v[0]), sub(v[2], v[0]), sub(v[3], v[0])];
    let det = dot(e[0], cross(e[1], e[2])).abs();
    for &(a, wa) in gl {
        for &(b, wb) in gl {
            for &(c, wc) in gl {
                let l1 = a;
                let l2 = b * (1.0 - a);
                let l3 = c * (1.0 - a) * (1.0 - b);
                let p = add(v[0], add(scale(e[0], l1), add(scale(e[1], l2), scale(e[2], l3))));
                let w = wa * wb * wc * (1.0 - a) * (1.0 - a) * (1.0 - b) * det;
                out.push((p, w));
            }
        }
    }
}

/// Quadrature points for cell `k`. Box-mesh cells get a tensor rule; other
/// cells are split into tetrahedra fanned from the vertex mean over each
/// face's triangles around the face centroid.
pub fn cell_rule(mesh: &Mesh, k: usize, n: usize) -> Vec<(Vec3, f64)> {
    let gl = gauss_legendre(n);
    let mut out = Vec::new();
    cell_rule_with(mesh, k, &gl, &mut out);
    out
}

pub(crate) fn cell_rule_with(mesh: &Mesh, k: usize, gl: &[(f64, f64)], out: &mut Vec<(Vec3, f64)>) {
    out.clear();
    if let Some(grid) = mesh.grid() {
        let [nx, ny, _] = grid.dims();
        let (i, j, kk) = (k % nx, (k / nx) % ny, k / (nx * ny));
        let lo = [grid.coords[0][i], grid.coords[1][j], grid.coords[2][kk]];
        let h = [
            grid.coords[0][i + 1] - lo[0],
            grid.coords[1][j + 1] - lo[1],
            grid.coords[2][kk + 1] - lo[2],
        ];
        let vol = h[0] * h[1] * h[2];
        for &(a, wa) in gl {
            for &(b, wb) in gl {
                for &(c, wc) in gl {
                    let p = [lo[0] + a * h[0], lo[1] + b * h[1], lo[2] + c * h[2]];
                    out.push((p, wa * wb * wc * vol));
                }
            }
        }
        return;
    }
    tets_into(mesh, k, gl, out);
}

fn tets_into(mesh: &Mesh, k: usize, gl: &[(f64, f64)], out: &mut Vec<(Vec3, f64)>) {
    let verts: Vec<Vec3> = mesh
        .cell_vertices(k)
        .into_iter()
        .map(|v| mesh.vertices()[v])
        .collect();
    let apex = centroid(&verts);
    for &f in mesh.cell_faces(k) {
        let fc = mesh.face(f).centroid;
        let vs = mesh.face_vertices(f);
        for i in 0..vs.len() {
            let a = mesh.vertices()[vs[i]];
            let b = mesh.vertices()[vs[(i + 1) % vs.len()]];
            tet_rule([apex, fc, a, b], gl, out);
        }
    }
}

/// `∫_Ω g dx` with `g` evaluated per cell, `n` points per direction.
pub fn integrate_cellwise(
    mesh: &Mesh,
    n: usize,
    mut integrand: impl FnMut(usize, Vec3) -> f64,
) -> f64 {
    let gl = gauss_legendre(n);
    let mut pts = Vec::new();
    let mut total = 0.0;
    for k in 0..mesh.n_cells() {
        cell_rule_with(mesh, k, &gl, &mut pts);
        total += pts.iter().map(|&(p, w)| w * integrand(k, p)).sum::<f64>();
    }
    total
}

/// Tetrahedral-split rule regardless of any box structure.
pub fn cell_rule_tets(mesh: &Mesh, k: usize, n: usize) -> Vec<(Vec3, f64)> {
    let mut out = Vec::new();
    tets_into(mesh, k, &gauss_legendre(n), &mut out);
    out
}
