//! Grid-based checks of stochastic orderings between two minima.

pub mod grid;
pub mod lemmas;
pub mod premise;
pub mod scan;
pub mod schur;
pub mod verdict;

pub use grid::{Grid, GridKind};
pub use lemmas::{
    hazard_factor, lemma_monotonicity_suite, phi, phi1, phi2, phi3, psi, LemmaReport,
};
pub use premise::power_hr_premise;
pub use scan::{monotonicity_scan, Direction, MonotonicityReport, Witness};
pub use schur::{schur_differential_check, SchurEvidence, SchurReport};
pub use verdict::{
    check, check_hazard_rate, check_likelihood_ratio, check_usual_stochastic, CheckOptions,
    OrderingVerdict, Outcome, Relation,
};
