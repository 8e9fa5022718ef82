//! Mesh suite and geometry oracles shared by the integration tests.
#![allow(dead_code)]

use pfvm::mesh::{generate_box_mesh, Mesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Coords = [Vec<f64>; 3];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(extent: [f64; 3], n: [usize; 3]) -> Coords {
    std::array::from_fn(|a| (0..=n[a]).map(|i| extent[a] * i as f64 / n[a] as f64).collect())
}

/// Strictly increasing coordinates with interval widths varying up to 4x.
pub fn graded(rng: &mut ChaCha8Rng, origin: [f64; 3], n: [usize; 3]) -> Coords {
    std::array::from_fn(|a| {
        let mut x = vec![origin[a]];
        for _ in 0..n[a] {
            let h = rng.gen_range(0.05..0.2);
            x.push(x.last().unwrap() + h);
        }
        x
    })
}

/// Significant points placed at a fixed fraction of each interval, one
/// fraction per interval and axis, so the point set stays a tensor grid and
/// neighbour segments remain orthogonal to the shared faces.
pub fn shifted_points(rng: &mut ChaCha8Rng, c: &Coords) -> Vec<[f64; 3]> {
    let frac: [Vec<f64>; 3] =
        std::array::from_fn(|a| (0..c[a].len() - 1).map(|_| rng.gen_range(0.2..0.8)).collect());
    let pos = |a: usize, i: usize| c[a][i] + frac[a][i] * (c[a][i + 1] - c[a][i]);
    let (nx, ny, nz) = (c[0].len() - 1, c[1].len() - 1, c[2].len() - 1);
    let mut out = Vec::with_capacity(nx * ny * nz);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                out.push([pos(0, i), pos(1, j), pos(2, k)]);
            }
        }
    }
    out
}

pub struct Case {
    pub name: String,
    pub coords: Coords,
    pub mesh: Mesh,
}

/// The test mesh suite: uniform, anisotropic, graded and shifted-point boxes.
pub fn suite(count: usize, seed: u64) -> Vec<Case> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let n = [r.gen_range(1..6), r.gen_range(1..6), r.gen_range(1..6)];
        let (name, coords) = match i % 3 {
            0 => {
                let ext = [r.gen_range(0.5..2.0), r.gen_range(0.5..2.0), r.gen_range(0.5..2.0)];
                (format!("uniform{n:?}"), uniform(ext, n))
            }
            _ => {
                let origin = [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)];
                (format!("graded{n:?}"), graded(&mut r, origin, n))
            }
        };
        let mut mesh = generate_box_mesh(coords.clone()).unwrap();
        let name = if i % 3 == 2 {
            mesh = mesh.with_significant_points(shifted_points(&mut r, &coords)).unwrap();
            format!("{name}+shifted")
        } else {
            name
        };
        out.push(Case { name, coords, mesh });
    }
    out
}

/// Interior face pairs `(K, L, area, |x_L - x_K|)` and boundary faces
/// `(K, area, distance from x_K to the face)` straight from the coordinates.
pub struct BoxFaces {
    pub interior: Vec<(usize, usize, f64, f64)>,
    pub boundary: Vec<(usize, f64, f64)>,
    pub volumes: Vec<f64>,
}

pub fn box_faces(c: &Coords, points: &[[f64; 3]]) -> BoxFaces {
    let n = [c[0].len() - 1, c[1].len() - 1, c[2].len() - 1];
    let idx = |i: [usize; 3]| i[0] + n[0] * (i[1] + n[1] * i[2]);
    let w = |a: usize, i: usize| c[a][i + 1] - c[a][i];
    let mut interior = Vec::new();
    let mut boundary = Vec::new();
    let mut volumes = vec![0.0; n[0] * n[1] * n[2]];
    for k in 0..n[2] {
        for j in 0..n[1] {
            for i in 0..n[0] {
                let ijk = [i, j, k];
                let cell = idx(ijk);
                volumes[cell] = w(0, i) * w(1, j) * w(2, k);
                for a in 0..3 {
                    let (b, d) = ((a + 1) % 3, (a + 2) % 3);
                    let area = w(b, ijk[b]) * w(d, ijk[d]);
                    let x = points[cell][a];
                    if ijk[a] == 0 {
                        boundary.push((cell, area, x - c[a][0]));
                    }
                    if ijk[a] + 1 == n[a] {
                        boundary.push((cell, area, c[a][n[a]] - x));
                    } else {
                        let mut up = ijk;
                        up[a] += 1;
                        let other = idx(up);
                        interior.push((cell, other, area, points[other][a] - x));
                    }
                }
            }
        }
    }
    BoxFaces {
        interior,
        boundary,
        volumes,
    }
}

pub fn points_of(mesh: &Mesh) -> Vec<[f64; 3]> {
    mesh.cells().iter().map(|c| c.center).collect()
}

pub fn random_values(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
