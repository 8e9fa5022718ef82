//! Energy bookkeeping for the a priori estimate, weak-form and flux
//! consistency residuals, and mesh refinement studies.

mod consistency;
mod ledger;
mod study;
mod testfn;
mod weak;

pub use consistency::{gradient_conv_residual, ConsistencyResidual, CONSISTENCY_QUADRATURE};
pub use ledger::{
    apriori_bound_check, energy_ledger, BoundCoefficients, BoundReport, EnergyStep, EnergyTerms, EstimateLedger,
    LedgerRow, LEDGER_HEADER,
};
pub use study::{
    nesting, refined_meshes, refinement_study, refinement_study_on, space_time_difference, ConvergenceTable,
    LevelSamples, StudyMode, StudyRow, STUDY_HEADER, TIME_SAMPLES,
};
pub use testfn::{bump1, Bump, TimeBump};
pub use weak::{weak_residual, WeakResidual};
