use std::sync::Arc;

use super::flux::{BoundaryData, BoundaryValue, FluxOperator};
use super::reaction::f0;
use super::ModelParams;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::interp::{check_len, MeshFunction};
use crate::mesh::Mesh;

/// Additive source `(t, x) -> (forcing_u, forcing_p)` sampled at significant points.
pub type Source = Arc<dyn Fn(f64, Vec3) -> (f64, f64) + Send + Sync>;

/// Unknowns at time `t` together with their time derivatives there.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub t: f64,
    pub u: MeshFunction,
    pub p: MeshFunction,
    pub udot: MeshFunction,
    pub pdot: MeshFunction,
}

/// Semi-discrete system on a fixed mesh: model parameters, boundary data,
/// optional forcing and the assembled flux operator.
#[derive(Clone)]
pub struct Scheme<'m> {
    mesh: &'m Mesh,
    params: ModelParams,
    boundary: BoundaryData,
    forcing: Option<Source>,
    op: FluxOperator,
    fixed_u: Option<Vec<f64>>,
    fixed_p: Option<Vec<f64>>,
}

impl<'m> Scheme<'m> {
    pub fn new(mesh: &'m Mesh, params: ModelParams, boundary: BoundaryData, forcing: Option<Source>) -> Result<Self> {
        params.validate()?;
        let op = FluxOperator::new(mesh);
        let fixed = |v: &BoundaryValue| (!v.is_time_dependent()).then(|| op.boundary_values(v, 0.0));
        Ok(Scheme {
            mesh,
            fixed_u: fixed(&boundary.u),
            fixed_p: fixed(&boundary.p),
            params,
            boundary,
            forcing,
            op,
        })
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.mesh
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn operator(&self) -> &FluxOperator {
        &self.op
    }

    pub fn boundary(&self) -> &BoundaryData {
        &self.boundary
    }

    /// Evaluates `(u̇, ṗ)` into the output slices.
    pub fn rhs_into(&self, t: f64, u: &[f64], p: &[f64], udot: &mut [f64], pdot: &mut [f64]) -> Result<()> {
        let gu_buf;
        let gu = match &self.fixed_u {
            Some(g) => g.as_slice(),
            None => {
                gu_buf = self.op.boundary_values(&self.boundary.u, t);
                &gu_buf
            }
        };
        let gp_buf;
        let gp = match &self.fixed_p {
            Some(g) => g.as_slice(),
            None => {
                gp_buf = self.op.boundary_values(&self.boundary.p, t);
                &gp_buf
            }
        };
        let prm = &self.params;
        let inv_xi2 = 1.0 / (prm.xi * prm.xi);
        let drive = prm.drive_coefficient();
        let inv_alpha = 1.0 / prm.alpha;
        let mut bad = None;
        for k in 0..u.len() {
            let (fu, fp) = match &self.forcing {
                Some(src) => src(t, self.mesh.cell(k).center),
                None => (0.0, 0.0),
            };
            let lam = prm.limiter.apply(prm.drive.eval(u[k], p[k]));
            let (div_p, div_u) = self.op.divergence_pair((p, gp), (u, gu), k);
            let pd = (f0(p[k]) * inv_xi2 + drive * lam - div_p + fp) * inv_alpha;
            let ud = prm.latent_heat * pd - div_u + fu;
            pdot[k] = pd;
            udot[k] = ud;
            if bad.is_none() && !(pd.is_finite() && ud.is_finite()) {
                bad = Some(k);
            }
        }
        match bad {
            Some(cell) => Err(Error::Blowup { t, cell }),
            None => Ok(()),
        }
    }

    /// State at `t` with derivatives evaluated.
    pub fn state(&self, t: f64, u: MeshFunction, p: MeshFunction) -> Result<SolverState> {
        check_len(self.mesh, &u)?;
        check_len(self.mesh, &p)?;
        let n = u.len();
        let mut udot = vec![0.0; n];
        let mut pdot = vec![0.0; n];
        self.rhs_into(t, &u, &p, &mut udot, &mut pdot)?;
        Ok(SolverState {
            t,
            u,
            p,
            udot: MeshFunction::from_raw(udot),
            pdot: MeshFunction::from_raw(pdot),
        })
    }
}

/// `(u̇, ṗ)` of the semi-discrete scheme at `(t, u, p)`.
pub fn semi_discrete_rhs(scheme: &Scheme, t: f64, u: &[f64], p: &[f64]) -> Result<(MeshFunction, MeshFunction)> {
    check_len(scheme.mesh(), u)?;
    check_len(scheme.mesh(), p)?;
    let mut udot = vec![0.0; u.len()];
    let mut pdot = vec![0.0; u.len()];
    scheme.rhs_into(t, u, p, &mut udot, &mut pdot)?;
    Ok((MeshFunction::from_raw(udot), MeshFunction::from_raw(pdot)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::uniform_box;
    use crate::model::Limiter;

    #[test]
    fn zero_state_is_fixed() {
        let m = uniform_box([1.0; 3], [3, 3, 3]).unwrap();
        let s = Scheme::new(&m, ModelParams::default(), BoundaryData::default(), None).unwrap();
        let z = vec![0.0; m.n_cells()];
        let (ud, pd) = semi_discrete_rhs(&s, 0.0, &z, &z).unwrap();
        assert!(ud.iter().chain(pd.iter()).all(|&v| v == 0.0));
    }

    #[test]
    fn single_cell_by_hand() {
        let m = uniform_box([1.0; 3], [1, 1, 1]).unwrap();
        let params = ModelParams {
            latent_heat: 2.0,
            alpha: 0.5,
            beta: 1.0,
            b: 3.0,
            xi: 0.5,
            limiter: Limiter::default(),
            ..Default::default()
        };
        let s = Scheme::new(&m, params, BoundaryData::default(), None).unwrap();
        let (u, p) = (-0.4, 0.3);
        // six faces with tau = 2, zero data: F_K(w) = 12 w
        let f0 = 0.3 * 0.7 * (0.3 - 0.5);
        let pd = (f0 / 0.25 - (3.0 / 0.5) * u - 12.0 * p) / 0.5;
        let ud = 2.0 * pd - 12.0 * u;
        let (a, b) = semi_discrete_rhs(&s, 0.0, &[u], &[p]).unwrap();
        assert!((b[0] - pd).abs() < 1e-13, "{} vs {pd}", b[0]);
        assert!((a[0] - ud).abs() < 1e-13);
    }

    #[test]
    fn blowup_names_the_cell() {
        let m = uniform_box([1.0; 3], [2, 1, 1]).unwrap();
        let s = Scheme::new(&m, ModelParams::default(), BoundaryData::default(), None).unwrap();
        let err = semi_discrete_rhs(&s, 0.5, &[0.0, 0.0], &[0.0, f64::INFINITY]).unwrap_err();
        assert!(matches!(err, Error::Blowup { cell: 0, .. } | Error::Blowup { cell: 1, .. }));
    }
}
