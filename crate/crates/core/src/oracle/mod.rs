//! Independent checks: the exact solution family `w^eta`, sampled sub- and
//! super-solution envelopes, a manufactured-solution harness and a direct
//! linear solve at `mu = 0`, combined into one verification suite.

mod envelope;
mod exact;
mod linear_reference;
mod mms;
mod suite;

pub use envelope::{
    bound_check, envelope, envelope_pair, is_admissible, sample_field, sector, sonic_w, BoundReport, Envelope, EnvelopePair, Side,
    Violation, BOUND_BUFFER,
};
pub use exact::{exact_jet, exact_w, w_equation_residual, EtaVector, Jet};
pub use linear_reference::linear_reference;
pub use mms::{mms_convergence, MmsRow, MmsTable};
pub use suite::{run_suite, PropertyResult, SuiteConfig, SuiteGrid, SuiteReport};
