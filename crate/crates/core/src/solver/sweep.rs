use super::config::SolverConfig;
use super::continuation::{continuation_solve, StageRecord};
use super::fields::{reconstruct_fields, SolutionField};
use super::newton::newton_solve;
use super::operator::Discretization;
use crate::error::Error;
use crate::gas::GasConstants;

#[derive(Debug, Clone)]
pub struct SweepResult {
    /// One field per completed viscosity value, in schedule order.
    pub fields: Vec<SolutionField>,
    /// Linear-in-eps extrapolation of phi to `eps = 0` from the last two
    /// fields. An estimate only: it solves no discrete system.
    pub extrapolated_phi: Option<Vec<f64>>,
    /// Viscosity value and error at which the sweep stopped early.
    pub failure: Option<(f64, Error)>,
}

/// Solves at each eps of the schedule. Each new eps first tries Newton at
/// `mu = 1` from the previous solution and falls back to a full
/// continuation.
pub fn epsilon_sweep(disc: &Discretization, cfg: &SolverConfig, gas: &GasConstants) -> SweepResult {
    let mut fields: Vec<SolutionField> = Vec::new();
    let mut failure = None;
    for &eps in &cfg.eps_schedule {
        let warm = fields.last().map(|f| {
            let mut psi = f.psi.clone();
            newton_solve(disc, 1.0, eps, &mut psi, &cfg.newton).map(|rep| {
                let stage = StageRecord {
                    mu: 1.0,
                    step: 0.0,
                    iterations: rep.iterations,
                    residual: rep.residual,
                    margin: disc.ellipticity_margin(&psi),
                };
                (psi, vec![stage])
            })
        });
        let solved = match warm {
            Some(Ok(ok)) => Ok(ok),
            _ => continuation_solve(disc, eps, cfg, None).map(|r| (r.psi, r.stages)),
        };
        match solved.and_then(|(psi, stages)| reconstruct_fields(disc, &psi, 1.0, eps, gas, stages)) {
            Ok(f) => fields.push(f),
            Err(e) => {
                failure = Some((eps, e));
                break;
            }
        }
    }
    let extrapolated_phi = match fields.as_slice() {
        [.., a, b] => {
            let r = b.eps / (a.eps - b.eps);
            Some(a.phi.iter().zip(&b.phi).map(|(pa, pb)| pb - r * (pa - pb)).collect())
        }
        _ => None,
    };
    SweepResult { fields, extrapolated_phi, failure }
}
