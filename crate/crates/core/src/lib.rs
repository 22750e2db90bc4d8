//! Self-similar supersonic Chaplygin-gas flow past a conical wing with
//! Λ-shaped cross sections.
//!
//! The exterior flow is assembled in closed form ([`geometry`]), the
//! elliptic region behind it is meshed ([`mesh`]) and the regularised
//! interior problem is solved by Newton continuation ([`solver`]).
//! [`oracle`] holds independent checks: exact solutions, sub/super-solution
//! envelopes and manufactured-solution convergence.

pub mod error;
pub mod gas;
pub mod geometry;
pub mod mesh;
pub mod oracle;
pub mod polar;
pub mod solver;

pub use error::{Error, Result};
pub use gas::{normalize_freestream, FreeStream, GasConstants};
pub use geometry::{classify_regime, Regime, RegimeReport, WingAngles};
pub use polar::{admissible, polar_state, shock_angle, PolarState};
