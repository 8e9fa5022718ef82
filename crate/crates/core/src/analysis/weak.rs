use super::testfn::{Bump, TimeBump};
use crate::mesh::Mesh;
use crate::model::{cell_flux, f0, BoundaryValue, ModelParams, SolverState, Source};
use crate::quadrature::cell_rule;

const POINTS: usize = 3;

/// Per-cell moments and point values of one spatial test function.
struct Moments {
    cell: Vec<f64>,
    point: Vec<f64>,
}

impl Moments {
    fn new(mesh: &Mesh, b: &Bump) -> Self {
        let (lo, hi) = b.support();
        let cell = (0..mesh.n_cells())
            .map(|k| {
                let verts = mesh.cell_vertices(k);
                let touches = (0..3).all(|a| {
                    let xs = verts.iter().map(|&v| mesh.vertices()[v][a]);
                    let (mn, mx) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(m, n), x| (m.min(x), n.max(x)));
                    mx > lo[a] && mn < hi[a]
                });
                if !touches {
                    return 0.0;
                }
                cell_rule(mesh, k, POINTS).iter().map(|&(x, w)| w * b.value(x)).sum()
            })
            .collect();
        let point = mesh.cells().iter().map(|c| b.value(c.center)).collect();
        Moments { cell, point }
    }

    fn pair(&self, w: &[f64]) -> f64 {
        self.cell.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    /// `Σ_K v(x_K) F_K(w)`, the two-point counterpart of `∫ ∇w · ∇v`.
    fn grad_pair(&self, mesh: &Mesh, w: &[f64]) -> f64 {
        (0..mesh.n_cells())
            .filter(|&k| self.point[k] != 0.0)
            .map(|k| self.point[k] * cell_flux(mesh, w, &BoundaryValue::Zero, 0.0, k))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakResidual {
    pub heat: f64,
    pub phase: f64,
}

/// Weak-form residuals of a discrete trajectory, tested against `ψ(t) v(x)`
/// in the heat equation and `φ(t) q(x)` in the phase equation.
///
/// Values enter through `S` against cell moments of the test functions.
/// Gradient terms use the flux pairing `Σ_K v(x_K) F_K`, which converges to
/// `∫ ∇w · ∇v`; time integrals use the trapezoid rule over the snapshots,
/// which must be ordered in time.
pub fn weak_residual(
    mesh: &Mesh,
    params: &ModelParams,
    trajectory: &[SolverState],
    psi: TimeBump,
    phi: TimeBump,
    v: &Bump,
    q: &Bump,
    forcing: Option<&Source>,
) -> WeakResidual {
    let mv = Moments::new(mesh, v);
    let mq = Moments::new(mesh, q);
    let inv_xi2 = 1.0 / (params.xi * params.xi);
    let drive = params.drive_coefficient();
    let forcing_pair = |t: f64| -> (f64, f64) {
        let Some(src) = forcing else { return (0.0, 0.0) };
        let mut acc = (0.0, 0.0);
        for k in 0..mesh.n_cells() {
            if mv.cell[k] == 0.0 && mq.cell[k] == 0.0 {
                continue;
            }
            for (x, w) in cell_rule(mesh, k, POINTS) {
                let (fu, fp) = src(t, x);
                acc.0 += w * fu * v.value(x);
                acc.1 += w * fp * q.value(x);
            }
        }
        acc
    };
    let densities: Vec<(f64, f64, f64)> = trajectory
        .iter()
        .map(|s| {
            let (fu, fp) = forcing_pair(s.t);
            let heat = mv.pair(&s.udot) + mv.grad_pair(mesh, &s.u)
                - params.latent_heat * mv.pair(&s.pdot)
                - fu;
            let reaction: Vec<f64> = s
                .u
                .iter()
                .zip(s.p.iter())
                .map(|(&u, &p)| f0(p) * inv_xi2 + drive * params.limiter.apply(params.drive.eval(u, p)))
                .collect();
            let phase = params.alpha * mq.pair(&s.pdot) + mq.grad_pair(mesh, &s.p) - mq.pair(&reaction) - fp;
            (s.t, heat, phase)
        })
        .collect();
    let mut out = WeakResidual {
        heat: 0.0,
        phase: 0.0,
    };
    for w in densities.windows(2) {
        let (t0, h0, p0) = w[0];
        let (t1, h1, p1) = w[1];
        let dt = t1 - t0;
        out.heat += 0.5 * dt * (psi.value(t0) * h0 + psi.value(t1) * h1);
        out.phase += 0.5 * dt * (phi.value(t0) * p0 + phi.value(t1) * p1);
    }
    out
}
