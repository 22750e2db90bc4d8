use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NewtonConfig {
    pub max_iterations: usize,
    /// Tolerance on the infinity norm of the (row-scaled) residual.
    pub tolerance: f64,
    pub max_halvings: usize,
    /// Required relative residual of each linear solve.
    pub linear_tolerance: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self { max_iterations: 30, tolerance: 1e-10, max_halvings: 20, linear_tolerance: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    /// Initial continuation step in mu.
    pub mu_step: f64,
    /// Smallest step before the continuation gives up.
    pub mu_min_step: f64,
    /// Double the step again after each accepted stage (capped at `mu_step`).
    pub mu_regrow: bool,
    /// Viscosity values, strictly decreasing.
    pub eps_schedule: Vec<f64>,
    pub newton: NewtonConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            mu_step: 0.1,
            mu_min_step: 1e-3,
            mu_regrow: true,
            eps_schedule: vec![0.2, 0.1, 0.05, 0.025, 0.0125],
            newton: NewtonConfig::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu_step > 0.0 && self.mu_step <= 1.0) {
            return Err(Error::invalid("mu_step", format!("must lie in (0, 1], got {}", self.mu_step)));
        }
        if !(self.mu_min_step > 0.0 && self.mu_min_step <= self.mu_step) {
            return Err(Error::invalid("mu_min_step", "must lie in (0, mu_step]"));
        }
        if self.eps_schedule.is_empty() {
            return Err(Error::invalid("eps_schedule", "must not be empty"));
        }
        if self.eps_schedule.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(Error::invalid("eps_schedule", "entries must be positive"));
        }
        if self.eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::invalid("eps_schedule", "must be strictly decreasing"));
        }
        let n = &self.newton;
        if n.max_iterations == 0 || !(n.tolerance > 0.0) || !(n.linear_tolerance > 0.0) {
            return Err(Error::invalid("newton", "iteration count and tolerances must be positive"));
        }
        Ok(())
    }

    /// Lower clamp for psi during iteration.
    pub fn psi_floor(eps: f64) -> f64 {
        0.5 * (1.0 + eps).acosh()
    }
}
