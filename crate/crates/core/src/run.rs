//! Problem assembly from a [`RunConfig`] and the time loop.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::analysis::{BoundCoefficients, EstimateLedger};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::interp::{project, MeshFunction};
use crate::io::config::{BoundaryConfig, DtPolicy, ForcingConfig, InitialConfig, RunConfig};
use crate::mesh::Mesh;
use crate::model::{stable_dt, BoundaryData, BoundaryValue, ModelParams, Scheme, SolverState, Source, Stepper};

/// Field `(t, x) -> (u, p)`.
pub type Field = Arc<dyn Fn(f64, Vec3) -> (f64, f64) + Send + Sync>;

/// Manufactured solution `u* = a_u e^{-t} φ(x)`, `p* = a_p e^{-t} φ(x)` with
/// `φ = Π sin(π (x_i - lo_i) / l_i)`, vanishing on the boundary of the box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Manufactured {
    pub lo: Vec3,
    pub extent: Vec3,
    pub amp_u: f64,
    pub amp_p: f64,
    pub params: ModelParams,
}

impl Manufactured {
    pub fn on_box(lo: Vec3, hi: Vec3, params: ModelParams) -> Self {
        Manufactured {
            lo,
            extent: std::array::from_fn(|a| hi[a] - lo[a]),
            amp_u: -0.5,
            amp_p: 0.5,
            params,
        }
    }

    fn shape(&self, x: Vec3) -> f64 {
        (0..3)
            .map(|a| (PI * (x[a] - self.lo[a]) / self.extent[a]).sin())
            .product()
    }

    /// `-Δφ = κ φ`
    fn kappa(&self) -> f64 {
        (0..3).map(|a| (PI / self.extent[a]).powi(2)).sum()
    }

    pub fn exact(&self, t: f64, x: Vec3) -> (f64, f64) {
        let s = (-t).exp() * self.shape(x);
        (self.amp_u * s, self.amp_p * s)
    }

    /// Sources that make the exact pair solve the forced system.
    pub fn forcing(&self, t: f64, x: Vec3) -> (f64, f64) {
        let prm = &self.params;
        let (u, p) = self.exact(t, x);
        let k = self.kappa();
        // time derivatives are -u, -p; Laplacians are -κu, -κp
        let fp = -prm.alpha * p + k * p
            - crate::model::f0(p) / (prm.xi * prm.xi)
            - prm.drive_coefficient() * prm.limiter.apply(prm.drive.eval(u, p));
        let fu = -u + prm.latent_heat * p + k * u;
        (fu, fp)
    }
}

/// Everything the time loop needs besides the mesh.
#[derive(Clone)]
pub struct Problem {
    pub params: ModelParams,
    pub boundary: BoundaryData,
    pub forcing: Option<Source>,
    pub initial: Field,
    pub exact: Option<Field>,
}

/// `½(1 - tanh(d / (2√2 ξ)))`, solid on the negative side of `d`.
pub fn tanh_profile(d: f64, xi: f64) -> f64 {
    0.5 * (1.0 - (d / (2.0 * 2f64.sqrt() * xi)).tanh())
}

impl Problem {
    pub fn from_config(cfg: &RunConfig, mesh: &Mesh) -> Result<Self> {
        let params = cfg.params;
        let (lo, hi) = mesh.bounding_box();
        let mms = Manufactured::on_box(lo, hi, params);
        let xi = params.xi;
        let initial: Field = match cfg.initial {
            InitialConfig::SphericalNucleus { center, radius, u } => {
                let c = center.unwrap_or(std::array::from_fn(|a| 0.5 * (lo[a] + hi[a])));
                Arc::new(move |_, x| (u, tanh_profile(crate::geometry::dist(x, c) - radius, xi)))
            }
            InitialConfig::PlanarFront { axis, position, u } => {
                Arc::new(move |_, x| (u, tanh_profile(x[axis] - position, xi)))
            }
            InitialConfig::Mms => Arc::new(move |t, x| mms.exact(t, x)),
        };
        let boundary = match cfg.boundary {
            BoundaryConfig::Homogeneous => BoundaryData::default(),
            BoundaryConfig::Constant { u, p } => BoundaryData {
                u: BoundaryValue::Constant(u),
                p: BoundaryValue::Constant(p),
            },
            BoundaryConfig::Mms => BoundaryData {
                u: BoundaryValue::Field(Arc::new(move |t, x| mms.exact(t, x).0)),
                p: BoundaryValue::Field(Arc::new(move |t, x| mms.exact(t, x).1)),
            },
        };
        let forcing: Option<Source> = match cfg.forcing {
            ForcingConfig::None => None,
            ForcingConfig::Mms => Some(Arc::new(move |t, x| mms.forcing(t, x))),
        };
        let exact: Option<Field> = (cfg.forcing == ForcingConfig::Mms && cfg.initial == InitialConfig::Mms)
            .then(|| Arc::new(move |t, x| mms.exact(t, x)) as Field);
        Ok(Problem {
            params,
            boundary,
            forcing,
            initial,
            exact,
        })
    }

    pub fn scheme<'m>(&self, mesh: &'m Mesh) -> Result<Scheme<'m>> {
        Scheme::new(mesh, self.params, self.boundary.clone(), self.forcing.clone())
    }

    /// Initial state by sampling at significant points, derivatives evaluated.
    pub fn initial_state(&self, scheme: &Scheme) -> Result<SolverState> {
        let mesh = scheme.mesh();
        let u = project(mesh, |x| (self.initial)(0.0, x).0)?;
        let p = project(mesh, |x| (self.initial)(0.0, x).1)?;
        scheme.state(0.0, u, p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub state: SolverState,
}

#[derive(Debug)]
pub struct RunOutput {
    pub snapshots: Vec<Snapshot>,
    pub ledger: EstimateLedger,
    pub final_state: SolverState,
    pub dt: f64,
    pub steps: usize,
    /// Largest `|Λ(g(u_K, p_K))|` over all visited states.
    pub max_drive: f64,
    /// Numerical blowup that ended the run early.
    pub failure: Option<Error>,
}

/// Step size and step count covering `[0, t_final]` exactly with steps no
/// larger than `dt_max`.
pub fn time_grid(t_final: f64, dt_max: f64) -> (f64, usize) {
    if t_final == 0.0 {
        return (dt_max, 0);
    }
    let n = (t_final / dt_max * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    (t_final / n as f64, n)
}

/// Largest admissible step for `cfg` on `mesh`.
pub fn config_dt(cfg: &RunConfig, mesh: &Mesh) -> Result<f64> {
    match cfg.dt {
        DtPolicy::Stable { safety } => stable_dt(mesh, &cfg.params, safety),
        DtPolicy::Fixed { value } => Ok(value),
    }
}

/// Builds the mesh and runs the configured simulation.
pub fn run_simulation(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let mesh = cfg.build_mesh()?;
    run_on_mesh(cfg, &mesh, None, |_, _| {})
}

/// Runs `cfg` on `mesh`. `dt_max` overrides the configured step policy;
/// `observe` sees every state, starting with the initial one.
pub fn run_on_mesh(
    cfg: &RunConfig,
    mesh: &Mesh,
    dt_max: Option<f64>,
    mut observe: impl FnMut(usize, &SolverState),
) -> Result<RunOutput> {
    let problem = Problem::from_config(cfg, mesh)?;
    let scheme = problem.scheme(mesh)?;
    let dt_max = match dt_max {
        Some(dt) => dt,
        None => config_dt(cfg, mesh)?,
    };
    let (dt, steps) = time_grid(cfg.t_final, dt_max);
    let mut state = problem.initial_state(&scheme)?;
    let mut ledger = EstimateLedger::new(BoundCoefficients::new(&cfg.params, mesh.domain_volume()));
    let mut snapshots = Vec::new();
    let mut max_drive = drive_magnitude(&cfg.params, &state);
    ledger.record(mesh, &state);
    snapshots.push(Snapshot {
        step: 0,
        state: state.clone(),
    });
    observe(0, &state);

    let mut stepper = Stepper::new(mesh.n_cells());
    let mut failure = None;
    let mut done = 0;
    for n in 1..=steps {
        // land exactly on the grid point to avoid drift in t
        let target = if n == steps { cfg.t_final } else { n as f64 * dt };
        let h = target - state.t;
        if let Err(e) = stepper.step(&scheme, &mut state, h, cfg.integrator) {
            failure = Some(e);
            break;
        }
        done = n;
        max_drive = max_drive.max(drive_magnitude(&cfg.params, &state));
        observe(n, &state);
        if n % cfg.ledger_every == 0 || n == steps {
            ledger.record(mesh, &state);
        }
        if cfg.snapshot_every.is_some_and(|k| n % k == 0) || n == steps {
            snapshots.push(Snapshot {
                step: n,
                state: state.clone(),
            });
        }
    }
    if failure.is_some() && snapshots.last().is_none_or(|s| s.step != done) {
        snapshots.push(Snapshot {
            step: done,
            state: state.clone(),
        });
    }
    Ok(RunOutput {
        snapshots,
        ledger,
        final_state: state,
        dt,
        steps: done,
        max_drive,
        failure,
    })
}

fn drive_magnitude(params: &ModelParams, s: &SolverState) -> f64 {
    s.u.iter()
        .zip(s.p.iter())
        .map(|(&u, &p)| params.limiter.apply(params.drive.eval(u, p)).abs())
        .fold(0.0, f64::max)
}

/// `Σ_K m(K) p_K`
pub fn solid_volume(mesh: &Mesh, p: &MeshFunction) -> f64 {
    mesh.cells().iter().zip(p.iter()).map(|(c, &v)| c.volume * v).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_grid_lands_on_t_final() {
        let (dt, n) = time_grid(0.1, 0.03);
        assert_eq!(n, 4);
        assert!((dt - 0.025).abs() < 1e-17);
        assert_eq!(time_grid(0.0, 0.1).1, 0);
        assert_eq!(time_grid(0.1, 0.1).1, 1);
    }

    #[test]
    fn manufactured_forcing_balances_equations() {
        let params = ModelParams {
            xi: 0.3,
            ..Default::default()
        };
        let mms = Manufactured::on_box([0.0; 3], [1.0, 2.0, 1.5], params);
        let (t, x) = (0.3, [0.31, 0.77, 1.1]);
        let h = 1e-4;
        let (u, p) = mms.exact(t, x);
        let ut = (mms.exact(t + h, x).0 - mms.exact(t - h, x).0) / (2.0 * h);
        let pt = (mms.exact(t + h, x).1 - mms.exact(t - h, x).1) / (2.0 * h);
        let mut lap = (0.0, 0.0);
        for a in 0..3 {
            let (mut xp, mut xm) = (x, x);
            xp[a] += h;
            xm[a] -= h;
            let (up, pp) = mms.exact(t, xp);
            let (um, pm) = mms.exact(t, xm);
            lap.0 += (up - 2.0 * u + um) / (h * h);
            lap.1 += (pp - 2.0 * p + pm) / (h * h);
        }
        let (fu, fp) = mms.forcing(t, x);
        let lam = params.limiter.apply(u);
        let res_p = params.alpha * pt - lap.1 - crate::model::f0(p) / 0.09 - params.drive_coefficient() * lam - fp;
        let res_u = ut - lap.0 - params.latent_heat * pt - fu;
        assert!(res_p.abs() < 1e-6, "{res_p}");
        assert!(res_u.abs() < 1e-6, "{res_u}");
    }
}
