use super::testfn::Bump;
use crate::error::{Error, Result};
use crate::interp::check_len;
use crate::mesh::{BoxGrid, Mesh};
use crate::model::{cell_flux, BoundaryValue};
use crate::quadrature::{gauss_legendre, integrate_cellwise};

/// Quadrature points per direction used for `∫ S(p) Δq` on general cells.
pub const CONSISTENCY_QUADRATURE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyResidual {
    /// `T_n = Σ_K q(x_K) F_K(p)`
    pub discrete: f64,
    /// `T_n' = -∫ S(p) Δq`
    pub continuous: f64,
}

impl ConsistencyResidual {
    pub fn residual(&self) -> f64 {
        (self.discrete - self.continuous).abs()
    }
}

/// Compares the two-point flux pairing of `p` with `q` against the exact
/// integral of `S(p)` times `-Δq`.
pub fn gradient_conv_residual(mesh: &Mesh, p: &[f64], q: &Bump) -> Result<ConsistencyResidual> {
    check_len(mesh, p)?;
    let (lo, hi) = q.support();
    let (blo, bhi) = mesh.bounding_box();
    if (0..3).any(|a| !(q.radii[a] > 0.0) || lo[a] <= blo[a] || hi[a] >= bhi[a]) {
        return Err(Error::input("test function support must lie strictly inside the domain"));
    }
    for f in mesh.boundary_faces() {
        let vs = mesh.face_vertices(f);
        let overlaps = (0..3).all(|a| {
            let fmin = vs.iter().map(|&v| mesh.vertices()[v][a]).fold(f64::INFINITY, f64::min);
            let fmax = vs.iter().map(|&v| mesh.vertices()[v][a]).fold(f64::NEG_INFINITY, f64::max);
            fmax > lo[a] && fmin < hi[a]
        });
        if overlaps {
            return Err(Error::input(format!(
                "test function support touches boundary face {f}"
            )));
        }
    }
    let discrete = (0..mesh.n_cells())
        .map(|k| q.value(mesh.cell(k).center) * cell_flux(mesh, p, &BoundaryValue::Zero, 0.0, k))
        .sum();
    let continuous = match mesh.grid() {
        Some(grid) => -separable_laplacian_pairing(grid, p, q),
        None => -integrate_cellwise(mesh, CONSISTENCY_QUADRATURE, |k, x| p[k] * q.laplacian(x)),
    };
    Ok(ConsistencyResidual {
        discrete,
        continuous,
    })
}

/// `(∫ φ_a, ∫ φ_a'')` over each coordinate interval of one axis, where
/// `φ_a(x) = φ((x - c) / r)`. The second moment is exact; the first uses
/// composite Gauss–Legendre on panels no wider than `r / 64`.
fn axis_moments(coords: &[f64], c: f64, r: f64) -> Vec<(f64, f64)> {
    let gl = gauss_legendre(8);
    let d1 = |x: f64| super::testfn::bump1((x - c) / r).1 / r;
    coords
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].max(c - r), w[1].min(c + r));
            if a >= b {
                return (0.0, 0.0);
            }
            let panels = ((b - a) / r * 64.0).ceil().max(1.0) as usize;
            let h = (b - a) / panels as f64;
            let mut m0 = 0.0;
            for i in 0..panels {
                let x0 = a + i as f64 * h;
                m0 += gl.iter().map(|&(s, w)| w * super::testfn::bump1((x0 + s * h - c) / r).0).sum::<f64>() * h;
            }
            (m0, d1(w[1]) - d1(w[0]))
        })
        .collect()
}

/// `Σ_K p_K ∫_K Δq` on a tensor grid, one axis at a time.
fn separable_laplacian_pairing(grid: &BoxGrid, p: &[f64], q: &Bump) -> f64 {
    let m: [Vec<(f64, f64)>; 3] = std::array::from_fn(|a| axis_moments(&grid.coords[a], q.center[a], q.radii[a]));
    let [nx, ny, nz] = grid.dims();
    let mut total = 0.0;
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let (x, y, z) = (m[0][i], m[1][j], m[2][k]);
                let lap = x.1 * y.0 * z.0 + x.0 * y.1 * z.0 + x.0 * y.0 * z.1;
                if lap != 0.0 {
                    total += p[i + nx * (j + ny * k)] * lap;
                }
            }
        }
    }
    q.amplitude * total
}
