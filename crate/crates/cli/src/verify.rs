//! Identity checks run by `pfvm verify` on a fixed family of generated meshes.

use pfvm::interp::{build_dual, dual_cell_l2, inner, norm2, q_gradient_l2, qs_constant, seminorm2};
use pfvm::mesh::{generate_box_mesh, mesh_metrics, uniform_coords, Mesh};
use pfvm::model::{cell_flux, face_flux, BoundaryValue};
use pfvm::quadrature::integrate_cellwise;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRIALS: usize = 100;

pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

fn graded(n: usize, ratio: f64) -> Vec<f64> {
    let mut x = vec![0.0];
    let mut h = 1.0;
    for _ in 0..n {
        x.push(x.last().unwrap() + h);
        h *= ratio;
    }
    let total = *x.last().unwrap();
    x.iter().map(|v| v / total).collect()
}

/// Uniform, anisotropic, graded and shifted-point box meshes.
pub fn meshes(rng: &mut ChaCha8Rng) -> pfvm::Result<Vec<(String, Mesh)>> {
    let mut out = Vec::new();
    out.push((
        "uniform 4x4x4".to_string(),
        generate_box_mesh([uniform_coords(1.0, 4), uniform_coords(1.0, 4), uniform_coords(1.0, 4)])?,
    ));
    out.push((
        "anisotropic 3x5x2".to_string(),
        generate_box_mesh([uniform_coords(1.0, 3), uniform_coords(2.0, 5), uniform_coords(0.5, 2)])?,
    ));
    let coords = [graded(5, 1.3), graded(4, 0.7), graded(3, 1.6)];
    out.push(("graded 5x4x3".to_string(), generate_box_mesh(coords.clone())?));
    let frac: [Vec<f64>; 3] =
        std::array::from_fn(|a| (0..coords[a].len() - 1).map(|_| rng.gen_range(0.2..0.8)).collect());
    let pos = |a: usize, i: usize| coords[a][i] + frac[a][i] * (coords[a][i + 1] - coords[a][i]);
    let mut points = Vec::new();
    for k in 0..3 {
        for j in 0..4 {
            for i in 0..5 {
                points.push([pos(0, i), pos(1, j), pos(2, k)]);
            }
        }
    }
    out.push((
        "graded 5x4x3, shifted points".to_string(),
        generate_box_mesh(coords)?.with_significant_points(points)?,
    ));
    Ok(out)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Runs every check on every mesh and returns the worst residual per check.
pub fn run(seed: u64) -> pfvm::Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pyramid: f64 = 0.0;
    let mut l2: f64 = 0.0;
    let mut semi: f64 = 0.0;
    let mut qs: f64 = 0.0;
    let mut antisym: f64 = 0.0;
    let mut divergence: f64 = 0.0;
    for (_, mesh) in meshes(&mut rng)? {
        let m = mesh_metrics(&mesh);
        pyramid = pyramid.max(m.pyramid_residual.abs() / (3.0 * m.domain_volume));
        let dual = build_dual(&mesh);
        let c = qs_constant(&dual);
        let tau_sum: f64 = mesh.face_metrics().iter().map(|f| f.tau).sum();
        for _ in 0..TRIALS {
            let v: Vec<f64> = (0..mesh.n_cells()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let w: Vec<f64> = (0..mesh.n_cells()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let sv_sw = integrate_cellwise(&mesh, 1, |k, _| v[k] * w[k]);
            l2 = l2.max(rel(inner(&mesh, &v, &w), sv_sw));
            semi = semi.max(rel(seminorm2(&mesh, &w), 3.0 * q_gradient_l2(&mesh, &w)));
            let q: f64 = dual.cells.iter().map(|d| dual_cell_l2(d, &w).1).sum();
            qs = qs.max(q / (c * norm2(&mesh, &w)) - 1.0);
            for f in mesh.interior_faces() {
                let face = mesh.face(f);
                let a = face_flux(&mesh, &w, &BoundaryValue::Zero, 0.0, f, face.owner);
                let b = face_flux(&mesh, &w, &BoundaryValue::Zero, 0.0, f, face.neighbor.unwrap());
                antisym = antisym.max((a + b).abs());
            }
            let total: f64 = (0..mesh.n_cells()).map(|k| cell_flux(&mesh, &w, &BoundaryValue::Zero, 0.0, k)).sum();
            let boundary: f64 = mesh.boundary_faces().map(|f| mesh.metrics(f).tau * w[mesh.face(f).owner]).sum();
            divergence = divergence.max((total - boundary).abs() / tau_sum);
        }
    }
    Ok(vec![
        Check {
            name: "pyramid identity (relative)",
            residual: pyramid,
            tolerance: 1e-12,
        },
        Check {
            name: "inner product vs L2 of S (relative)",
            residual: l2,
            tolerance: 1e-10,
        },
        Check {
            name: "seminorm vs 3 |grad Q|^2 (relative)",
            residual: semi,
            tolerance: 1e-10,
        },
        Check {
            name: "Q-S inequality excess",
            residual: qs.max(0.0),
            tolerance: 1e-12,
        },
        Check {
            name: "flux antisymmetry",
            residual: antisym,
            tolerance: 0.0,
        },
        Check {
            name: "discrete divergence theorem (relative)",
            residual: divergence,
            tolerance: 1e-13,
        },
    ])
}
