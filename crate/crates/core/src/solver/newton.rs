use serde::{Deserialize, Serialize};

use super::config::NewtonConfig;
use super::operator::Discretization;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonReport {
    pub iterations: usize,
    /// Residual infinity norm before each step and at the end.
    pub history: Vec<f64>,
    pub residual: f64,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Damped Newton iteration at fixed `(mu, eps)`, starting from `psi`.
/// Each step is halved until the residual norm decreases.
pub fn newton_solve(
    disc: &Discretization,
    mu: f64,
    eps: f64,
    psi: &mut Vec<f64>,
    cfg: &NewtonConfig,
) -> Result<NewtonReport> {
    let floor = disc.psi_floor(eps);
    let clamp = |v: &mut Vec<f64>| v.iter_mut().for_each(|p| *p = p.max(floor));
    clamp(psi);
    let mut history = Vec::new();
    let mut lin = disc.linearize(psi, mu, eps)?;
    let mut r = inf_norm(&lin.residual);
    history.push(r);
    for it in 0..cfg.max_iterations {
        if r < cfg.tolerance {
            return Ok(NewtonReport { iterations: it, history, residual: r });
        }
        let rhs: Vec<f64> = lin.residual.iter().map(|v| -v).collect();
        let delta = lin.jacobian.solve(&rhs, cfg.linear_tolerance)?;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=cfg.max_halvings {
            let mut trial: Vec<f64> = psi.iter().zip(&delta).map(|(p, d)| p + lambda * d).collect();
            clamp(&mut trial);
            if let Ok(res) = disc.residual(&trial, mu, eps) {
                let rt = inf_norm(&res);
                if rt.is_finite() && rt < r {
                    accepted = Some(trial);
                    break;
                }
            }
            lambda *= 0.5;
        }
        let Some(next) = accepted else {
            return Err(Error::NewtonDivergence { iterations: it + 1, residual: r });
        };
        *psi = next;
        lin = disc.linearize(psi, mu, eps)?;
        r = inf_norm(&lin.residual);
        history.push(r);
    }
    if r < cfg.tolerance {
        Ok(NewtonReport { iterations: cfg.max_iterations, history, residual: r })
    } else {
        Err(Error::NewtonDivergence { iterations: cfg.max_iterations, residual: r })
    }
}
