//! Evidence layer: manufactured solutions, error norms, convergence and
//! thickness studies, and inf-sup estimates.

mod checks;
mod errors;
mod exact;
mod infsup;
mod locking;
mod study;

pub use checks::{biorthogonality_defect, partition_of_unity_defect};
pub use errors::{compute_errors, ErrorReport, ERROR_QUADRATURE};
pub use exact::{manufactured_solution, ExactSolution, ReferenceFields, ZeroFields};
pub use infsup::{estimate_infsup, InfSupPair, INFSUP_LIMIT};
pub use locking::{centre_region_mean, locking_sweep, LockingMode, LockingRow};
pub use study::{convergence_study, observed_rate, refinement_levels, solve_manufactured, StudyRecord};
