use std::fmt::Write as _;

use crate::interp::{norm2, seminorm2};
use crate::mesh::Mesh;
use crate::model::{double_well_constant, w0, ModelParams, SolverState};

/// Column names of the ledger CSV.
pub const LEDGER_HEADER: &str =
    "t,norm2_pdot,norm2_udot,semi2_p,semi2_u,well_energy,int_pdot,int_udot,lhs,rhs,margin";

/// Raw energy quantities of one state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyTerms {
    pub t: f64,
    /// `‖ṗ‖²_Π`
    pub norm2_pdot: f64,
    /// `‖u̇‖²_Π`
    pub norm2_udot: f64,
    /// `⟦p⟧²_Π`
    pub semi2_p: f64,
    /// `⟦u⟧²_Π`
    pub semi2_u: f64,
    /// `Σ_K w₀(p_K) m(K)`
    pub well_energy: f64,
}

/// Evaluates the energy terms of `state`.
pub fn energy_ledger(mesh: &Mesh, state: &SolverState) -> EnergyTerms {
    EnergyTerms {
        t: state.t,
        norm2_pdot: norm2(mesh, &state.pdot),
        norm2_udot: norm2(mesh, &state.udot),
        semi2_p: seminorm2(mesh, &state.p),
        semi2_u: seminorm2(mesh, &state.u),
        well_energy: mesh
            .cells()
            .iter()
            .zip(state.p.iter())
            .map(|(c, &p)| w0(p) * c.volume)
            .sum(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerRow {
    pub terms: EnergyTerms,
    /// Trapezoid integral of `‖ṗ‖²` from 0 to `t`.
    pub int_pdot: f64,
    pub int_udot: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// Coefficients of the estimate, fixed by the parameters and the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCoefficients {
    pub xi: f64,
    pub alpha: f64,
    pub latent_heat: f64,
    /// Weight of `∫‖u̇‖²` in units of `αξ²/L²`; 1/8 by default.
    pub udot_factor: f64,
    /// Source rate `(bβ)² B² m(Ω) / (2α)`.
    pub source: f64,
    /// `c_w m(Ω)`
    pub well_floor: f64,
}

impl BoundCoefficients {
    pub fn new(params: &ModelParams, domain_volume: f64) -> Self {
        let bb = params.b * params.beta;
        let big_b = params.limiter.bound();
        BoundCoefficients {
            xi: params.xi,
            alpha: params.alpha,
            latent_heat: params.latent_heat,
            udot_factor: 0.125,
            source: bb * bb * big_b * big_b * domain_volume / (2.0 * params.alpha),
            well_floor: double_well_constant() * domain_volume,
        }
    }

    fn xi2(&self) -> f64 {
        self.xi * self.xi
    }

    fn l2(&self) -> f64 {
        self.latent_heat * self.latent_heat
    }

    /// Dissipation density `¼αξ²‖ṗ‖² + c αξ²/L² ‖u̇‖²`.
    pub fn dissipation(&self, e: &EnergyTerms) -> f64 {
        0.25 * self.alpha * self.xi2() * e.norm2_pdot
            + self.udot_factor * self.alpha * self.xi2() / self.l2() * e.norm2_udot
    }

    /// Energy `½ξ²⟦p⟧² + αξ²/(4L²)⟦u⟧² + Σ w₀(p_K) m(K)`.
    pub fn energy(&self, e: &EnergyTerms) -> f64 {
        0.5 * self.xi2() * e.semi2_p + 0.25 * self.alpha * self.xi2() / self.l2() * e.semi2_u + e.well_energy
    }

    pub fn lhs(&self, e: &EnergyTerms, int_pdot: f64, int_udot: f64) -> f64 {
        let xi2 = self.xi2();
        0.25 * self.alpha * xi2 * int_pdot
            + self.udot_factor * self.alpha * xi2 / self.l2() * int_udot
            + 0.5 * xi2 * e.semi2_p
            + 0.25 * self.alpha * xi2 / self.l2() * e.semi2_u
    }

    pub fn rhs(&self, initial: &EnergyTerms, t: f64) -> f64 {
        let xi2 = self.xi2();
        let e0 = 0.5 * xi2 * initial.semi2_p
            + 0.5 * self.alpha * xi2 / self.l2() * initial.semi2_u
            + initial.well_energy;
        e0 * t.exp() + self.source * t.exp_m1() + self.well_floor
    }
}

/// Time series of energy terms with running integrals and the bound at
/// every sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateLedger {
    pub coefficients: BoundCoefficients,
    pub rows: Vec<LedgerRow>,
}

impl EstimateLedger {
    pub fn new(coefficients: BoundCoefficients) -> Self {
        EstimateLedger {
            coefficients,
            rows: Vec::new(),
        }
    }

    pub fn initial(&self) -> Option<&EnergyTerms> {
        self.rows.first().map(|r| &r.terms)
    }

    pub fn push(&mut self, terms: EnergyTerms) {
        let c = &self.coefficients;
        let (int_pdot, int_udot) = match self.rows.last() {
            Some(prev) => {
                let dt = terms.t - prev.terms.t;
                (
                    prev.int_pdot + 0.5 * dt * (prev.terms.norm2_pdot + terms.norm2_pdot),
                    prev.int_udot + 0.5 * dt * (prev.terms.norm2_udot + terms.norm2_udot),
                )
            }
            None => (0.0, 0.0),
        };
        let initial = self.rows.first().map_or(terms, |r| r.terms);
        let lhs = c.lhs(&terms, int_pdot, int_udot);
        let rhs = c.rhs(&initial, terms.t);
        self.rows.push(LedgerRow {
            terms,
            int_pdot,
            int_udot,
            lhs,
            rhs,
            margin: rhs - lhs,
        });
    }

    pub fn record(&mut self, mesh: &Mesh, state: &SolverState) {
        self.push(energy_ledger(mesh, state));
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 + 200 * self.rows.len());
        s.push_str(LEDGER_HEADER);
        s.push('\n');
        for r in &self.rows {
            let e = &r.terms;
            let _ = writeln!(
                s,
                "{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
                e.t,
                e.norm2_pdot,
                e.norm2_udot,
                e.semi2_p,
                e.semi2_u,
                e.well_energy,
                r.int_pdot,
                r.int_udot,
                r.lhs,
                r.rhs,
                r.margin
            );
        }
        s
    }

    /// Worst excess of `ΔE + ∫dissipation - S Δt` over the `Δt²(1 + |E|)`
    /// budget between consecutive samples; negative when every step passes.
    pub fn worst_energy_step(&self) -> Option<EnergyStep> {
        let c = &self.coefficients;
        self.rows
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let (a, b) = (&w[0].terms, &w[1].terms);
                let dt = b.t - a.t;
                let e0 = c.energy(a);
                let growth = c.energy(b) - e0 + 0.5 * dt * (c.dissipation(a) + c.dissipation(b));
                let budget = c.source * dt + dt * dt * (1.0 + e0.abs());
                EnergyStep {
                    index: i + 1,
                    growth,
                    budget,
                }
            })
            .max_by(|x, y| (x.growth - x.budget).total_cmp(&(y.growth - y.budget)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyStep {
    pub index: usize,
    pub growth: f64,
    pub budget: f64,
}

impl EnergyStep {
    pub fn passed(&self) -> bool {
        self.growth <= self.budget
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.margin >= 0.0
    }
}

/// Evaluates the a priori bound at the last sample not after `t_final`.
pub fn apriori_bound_check(ledger: &EstimateLedger, t_final: f64) -> Option<BoundReport> {
    let row = ledger.rows.iter().rev().find(|r| r.terms.t <= t_final * (1.0 + 1e-12))?;
    Some(BoundReport {
        t: row.terms.t,
        lhs: row.lhs,
        rhs: row.rhs,
        margin: row.margin,
    })
}
