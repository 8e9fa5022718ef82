use serde::{Deserialize, Serialize};

use super::reaction::F0_PRIME_BOUND;
use super::rhs::{Scheme, SolverState};
use super::flux::FluxOperator;
use super::ModelParams;
use crate::error::{Error, Result};
use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    ExplicitEuler,
    #[default]
    Rk4,
}

/// Explicit step size bound: `safety` over the sum of the diffusion,
/// reaction and drive stiffness estimates.
///
/// The temperature equation diffuses with unit coefficient while the phase
/// equation diffuses with `1/α`, so the diffusion term uses `max(1, 1/α)`.
pub fn stable_dt(mesh: &Mesh, params: &ModelParams, safety: f64) -> Result<f64> {
    if !(safety > 0.0 && safety <= 1.0) {
        return Err(Error::input(format!("safety factor must lie in (0, 1], got {safety}")));
    }
    params.validate()?;
    let diffusion = FluxOperator::new(mesh).max_row_sum() * (1.0f64).max(1.0 / params.alpha);
    let reaction = F0_PRIME_BOUND / (params.alpha * params.xi * params.xi);
    let drive = params.b * params.beta / (params.alpha * params.xi) * params.drive_lipschitz;
    Ok(safety / (diffusion + reaction + drive))
}

/// Reusable work arrays for repeated steps on one scheme.
pub struct Stepper {
    ku: [Vec<f64>; 3],
    kp: [Vec<f64>; 3],
    su: Vec<f64>,
    sp: Vec<f64>,
}

impl Stepper {
    pub fn new(n: usize) -> Self {
        Stepper {
            ku: std::array::from_fn(|_| vec![0.0; n]),
            kp: std::array::from_fn(|_| vec![0.0; n]),
            su: vec![0.0; n],
            sp: vec![0.0; n],
        }
    }

    /// Advances `state` in place by `dt`; derivatives are refreshed at the
    /// new time. On error the state is left untouched.
    pub fn step(&mut self, scheme: &Scheme, state: &mut SolverState, dt: f64, method: Integrator) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::input(format!("time step must be positive, got {dt}")));
        }
        let t = state.t;
        let n = state.u.len();
        let (u, p) = (&state.u[..], &state.p[..]);
        let (ud, pd) = (&state.udot[..], &state.pdot[..]);
        match method {
            Integrator::ExplicitEuler => {
                for k in 0..n {
                    self.su[k] = u[k] + dt * ud[k];
                    self.sp[k] = p[k] + dt * pd[k];
                }
            }
            Integrator::Rk4 => {
                let [k2u, k3u, k4u] = &mut self.ku;
                let [k2p, k3p, k4p] = &mut self.kp;
                let (su, sp) = (&mut self.su, &mut self.sp);
                for k in 0..n {
                    su[k] = u[k] + 0.5 * dt * ud[k];
                    sp[k] = p[k] + 0.5 * dt * pd[k];
                }
                scheme.rhs_into(t + 0.5 * dt, su, sp, k2u, k2p)?;
                for k in 0..n {
                    su[k] = u[k] + 0.5 * dt * k2u[k];
                    sp[k] = p[k] + 0.5 * dt * k2p[k];
                }
                scheme.rhs_into(t + 0.5 * dt, su, sp, k3u, k3p)?;
                for k in 0..n {
                    su[k] = u[k] + dt * k3u[k];
                    sp[k] = p[k] + dt * k3p[k];
                }
                scheme.rhs_into(t + dt, su, sp, k4u, k4p)?;
                let c = dt / 6.0;
                for k in 0..n {
                    su[k] = u[k] + c * (ud[k] + 2.0 * k2u[k] + 2.0 * k3u[k] + k4u[k]);
                    sp[k] = p[k] + c * (pd[k] + 2.0 * k2p[k] + 2.0 * k3p[k] + k4p[k]);
                }
            }
        }
        let t_new = t + dt;
        let [nu, np, _] = &mut self.ku;
        scheme.rhs_into(t_new, &self.su, &self.sp, nu, np)?;
        state.t = t_new;
        state.u.copy_from_slice(&self.su);
        state.p.copy_from_slice(&self.sp);
        state.udot.copy_from_slice(nu);
        state.pdot.copy_from_slice(np);
        Ok(())
    }
}

/// One step of `method` from `state`.
pub fn advance(scheme: &Scheme, state: &SolverState, dt: f64, method: Integrator) -> Result<SolverState> {
    let mut next = state.clone();
    Stepper::new(state.u.len()).step(scheme, &mut next, dt, method)?;
    Ok(next)
}
