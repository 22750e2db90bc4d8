//! Regularised interior problem: Newton iteration in psi with continuation
//! in mu and a sweep in the viscosity eps.

mod config;
mod continuation;
mod fields;
mod linear;
mod newton;
mod operator;
mod sweep;

pub use config::{NewtonConfig, SolverConfig};
pub use continuation::{continuation_solve, ContinuationResult, StageRecord};
pub use fields::{reconstruct_fields, FieldDiagnostics, SolutionField};
pub use linear::SparseSystem;
pub use newton::{newton_solve, NewtonReport};
pub use operator::{pde_point, BoundaryData, Discretization, Linearization, PdePoint, RowKind};
pub use sweep::{epsilon_sweep, SweepResult};
