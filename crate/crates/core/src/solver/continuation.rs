use serde::{Deserialize, Serialize};

use super::config::SolverConfig;
use super::newton::newton_solve;
use super::operator::Discretization;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub mu: f64,
    pub step: f64,
    pub iterations: usize,
    pub residual: f64,
    /// `min(phi - sqrt(1 + |xi|^2))` over the grid.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationResult {
    pub psi: Vec<f64>,
    pub eps: f64,
    pub stages: Vec<StageRecord>,
}

/// Homotopy in mu from the linear problem (`mu = 0`) to the full one.
/// `start` warm-starts the `mu = 0` stage.
pub fn continuation_solve(
    disc: &Discretization,
    eps: f64,
    cfg: &SolverConfig,
    start: Option<&[f64]>,
) -> Result<ContinuationResult> {
    cfg.validate()?;
    let mut psi = start.map(<[f64]>::to_vec).unwrap_or_else(|| disc.initial_guess(eps));
    let rep = newton_solve(disc, 0.0, eps, &mut psi, &cfg.newton)?;
    let mut stages = vec![StageRecord {
        mu: 0.0,
        step: 0.0,
        iterations: rep.iterations,
        residual: rep.residual,
        margin: disc.ellipticity_margin(&psi),
    }];
    let mut mu = 0.0;
    let mut step = cfg.mu_step;
    while mu < 1.0 {
        let target = if mu + step >= 1.0 - 1e-12 { 1.0 } else { mu + step };
        let mut trial = psi.clone();
        match newton_solve(disc, target, eps, &mut trial, &cfg.newton) {
            Ok(rep) => {
                stages.push(StageRecord {
                    mu: target,
                    step: target - mu,
                    iterations: rep.iterations,
                    residual: rep.residual,
                    margin: disc.ellipticity_margin(&trial),
                });
                mu = target;
                psi = trial;
                if cfg.mu_regrow {
                    step = (2.0 * step).min(cfg.mu_step);
                }
            }
            Err(e) if e.is_solver_failure() => {
                step *= 0.5;
                if step < cfg.mu_min_step {
                    return Err(Error::StepUnderflow { mu, step });
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ContinuationResult { psi, eps, stages })
}
