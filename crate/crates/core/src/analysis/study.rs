use std::fmt::Write as _;

use super::consistency::gradient_conv_residual;
use super::testfn::Bump;
use crate::error::{Error, Result};
use crate::io::config::{MeshSource, RunConfig};
use crate::mesh::{generate_box_mesh, mesh_metrics, refine_coords, Mesh};
use crate::run::{config_dt, run_on_mesh, time_grid, Field, Problem};

pub const STUDY_HEADER: &str = "level,mesh_norm,diff_u,diff_p,order_u,order_p,flux_residual";

/// Number of time samples (beyond `t = 0`) used for space-time norms.
pub const TIME_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub level: usize,
    pub mesh_norm: f64,
    pub diff_u: f64,
    pub diff_p: f64,
    pub order_u: f64,
    pub order_p: f64,
    pub flux_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyMode {
    /// Differences against the manufactured solution sampled at significant points.
    Exact,
    /// Differences between successive levels; the first row has none.
    Cauchy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub mode: StudyMode,
    /// Whether every Cauchy difference was integrated exactly on nested grids.
    pub nested: bool,
    pub rows: Vec<StudyRow>,
}

impl ConvergenceTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(STUDY_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
                r.level, r.mesh_norm, r.diff_u, r.diff_p, r.order_u, r.order_p, r.flux_residual
            );
        }
        s
    }
}

/// Fields of one level at the common sample times.
pub struct LevelSamples {
    pub times: Vec<f64>,
    pub u: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
}

/// For each fine cell, the coarse cell containing it, if the fine mesh
/// refines the coarse one (every fine cell's vertices lie in that coarse cell).
pub fn nesting(coarse: &Mesh, fine: &Mesh) -> Option<Vec<usize>> {
    (0..fine.n_cells())
        .map(|k| {
            let c = coarse.locate(fine.cell(k).center)?;
            fine.cell_vertices(k)
                .iter()
                .all(|&v| coarse.cell_contains(c, fine.vertices()[v], 1e-9))
                .then_some(c)
        })
        .collect()
}

/// Space-time `L²` distance between the piecewise constant reconstructions
/// of two levels sampled at the same times. Exact on nested meshes;
/// otherwise the coarse field is sampled at fine significant points.
pub fn space_time_difference(
    coarse: &Mesh,
    a: &LevelSamples,
    fine: &Mesh,
    b: &LevelSamples,
) -> Result<(f64, f64, bool)> {
    if a.times.len() != b.times.len() || a.times.iter().zip(&b.times).any(|(x, y)| (x - y).abs() > 1e-12 * (1.0 + x.abs())) {
        return Err(Error::input("levels were sampled at different times"));
    }
    let (map, nested) = match nesting(coarse, fine) {
        Some(m) => (m, true),
        None => {
            let m = (0..fine.n_cells())
                .map(|k| coarse.locate(fine.cell(k).center).ok_or(Error::OutsideDomain(fine.cell(k).center)))
                .collect::<Result<Vec<_>>>()?;
            (m, false)
        }
    };
    let dist2 = |x: &[f64], y: &[f64]| -> f64 {
        fine.cells()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let d = y[k] - x[map[k]];
                c.volume * d * d
            })
            .sum()
    };
    let du: Vec<f64> = a.u.iter().zip(&b.u).map(|(x, y)| dist2(x, y)).collect();
    let dp: Vec<f64> = a.p.iter().zip(&b.p).map(|(x, y)| dist2(x, y)).collect();
    Ok((trapezoid(&a.times, &du).sqrt(), trapezoid(&a.times, &dp).sqrt(), nested))
}

fn trapezoid(t: &[f64], v: &[f64]) -> f64 {
    if t.len() == 1 {
        return v[0];
    }
    t.windows(2)
        .zip(v.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

fn exact_error(mesh: &Mesh, s: &LevelSamples, exact: &Field) -> (f64, f64) {
    let mut eu = Vec::new();
    let mut ep = Vec::new();
    for (i, &t) in s.times.iter().enumerate() {
        let (mut su, mut sp) = (0.0, 0.0);
        for (k, c) in mesh.cells().iter().enumerate() {
            let (u, p) = exact(t, c.center);
            su += c.volume * (s.u[i][k] - u).powi(2);
            sp += c.volume * (s.p[i][k] - p).powi(2);
        }
        eu.push(su);
        ep.push(sp);
    }
    (trapezoid(&s.times, &eu).sqrt(), trapezoid(&s.times, &ep).sqrt())
}

/// Meshes for `levels` uniform refinements of a box configuration.
pub fn refined_meshes(cfg: &RunConfig, levels: usize) -> Result<Vec<Mesh>> {
    let MeshSource::Box(spec) = &cfg.mesh else {
        return Err(Error::config("mesh", "refinement studies need a box mesh"));
    };
    let mut coords = spec.coordinates()?;
    let mut out = Vec::with_capacity(levels);
    for level in 0..levels {
        if level > 0 {
            coords = std::array::from_fn(|a| refine_coords(&coords[a]));
        }
        out.push(generate_box_mesh(coords.clone())?);
    }
    Ok(out)
}

/// Runs `cfg` on `levels` successively halved box meshes.
pub fn refinement_study(cfg: &RunConfig, levels: usize) -> Result<ConvergenceTable> {
    if levels < 2 {
        return Err(Error::config("levels", "a study needs at least two levels"));
    }
    cfg.validate()?;
    refinement_study_on(cfg, &refined_meshes(cfg, levels)?)
}

/// Study over explicit meshes, ordered coarse to fine. Every level uses the
/// step size of the last mesh so all time grids coincide.
pub fn refinement_study_on(cfg: &RunConfig, meshes: &[Mesh]) -> Result<ConvergenceTable> {
    let finest = meshes.last().ok_or_else(|| Error::input("no meshes"))?;
    let (dt, steps) = time_grid(cfg.t_final, config_dt(cfg, finest)?);
    let stride = (steps / TIME_SAMPLES).max(1);
    let exact = Problem::from_config(cfg, finest)?.exact;
    let mode = if exact.is_some() { StudyMode::Exact } else { StudyMode::Cauchy };

    let mut rows: Vec<StudyRow> = Vec::new();
    let mut nested = true;
    let mut prev: Option<(usize, LevelSamples)> = None;
    for (level, mesh) in meshes.iter().enumerate() {
        let mut samples = LevelSamples {
            times: Vec::new(),
            u: Vec::new(),
            p: Vec::new(),
        };
        let out = run_on_mesh(cfg, mesh, Some(dt), |n, s| {
            if n % stride == 0 || n == steps {
                samples.times.push(s.t);
                samples.u.push(s.u.to_vec());
                samples.p.push(s.p.to_vec());
            }
        })?;
        if let Some(e) = out.failure {
            return Err(e);
        }
        let (lo, hi) = mesh.bounding_box();
        let flux_residual = gradient_conv_residual(mesh, &out.final_state.p, &Bump::inside(lo, hi, 0.8))?.residual();
        let (diff_u, diff_p) = match (&exact, &prev) {
            (Some(ex), _) => exact_error(mesh, &samples, ex),
            (None, Some((pl, ps))) => {
                let (du, dp, n) = space_time_difference(&meshes[*pl], ps, mesh, &samples)?;
                nested &= n;
                (du, dp)
            }
            (None, None) => (f64::NAN, f64::NAN),
        };
        let mesh_norm = mesh_metrics(mesh).mesh_norm;
        let (order_u, order_p) = match rows.last() {
            Some(r) if r.diff_u.is_finite() => {
                let hr = (r.mesh_norm / mesh_norm).ln();
                ((r.diff_u / diff_u).ln() / hr, (r.diff_p / diff_p).ln() / hr)
            }
            _ => (f64::NAN, f64::NAN),
        };
        rows.push(StudyRow {
            level,
            mesh_norm,
            diff_u,
            diff_p,
            order_u,
            order_p,
            flux_residual,
        });
        prev = Some((level, samples));
    }
    Ok(ConvergenceTable { mode, nested, rows })
}
