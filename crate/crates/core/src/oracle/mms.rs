use serde::{Deserialize, Serialize};

use super::exact::exact_w;
use crate::error::Result;
use crate::mesh::{generate_grid, DomainSpec};
use crate::solver::{continuation_solve, newton_solve, BoundaryData, Discretization, SolverConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MmsRow {
    pub n: usize,
    /// Max-norm error of phi against the exact solution.
    pub error: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MmsTable {
    pub eta: [f64; 3],
    pub mu: f64,
    pub rows: Vec<MmsRow>,
    /// `log2` error ratio between successive grids.
    pub orders: Vec<f64>,
}

/// Manufactured-solution study: every boundary node carries Dirichlet data
/// from `w^eta` and the discrete solution is compared against it on
/// `n x n` grids for each `n` in `sizes`. `mu` is either 0 (one Newton
/// solve) or 1 (full continuation).
pub fn mms_convergence(domain: &DomainSpec, eta: [f64; 3], mu: f64, sizes: &[usize], stretch: f64) -> Result<MmsTable> {
    let cfg = SolverConfig::default();
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let grid = generate_grid(domain, n, n, stretch)?;
        let disc = Discretization::new(grid, BoundaryData::Manufactured { eta });
        let (psi, iterations) = if mu == 0.0 {
            let mut psi = disc.initial_guess(0.0);
            let rep = newton_solve(&disc, 0.0, 0.0, &mut psi, &cfg.newton)?;
            (psi, rep.iterations)
        } else {
            let r = continuation_solve(&disc, 0.0, &cfg, None)?;
            let its = r.stages.iter().map(|s| s.iterations).sum();
            (r.psi, its)
        };
        let error = psi
            .iter()
            .zip(&disc.grid.nodes)
            .zip(&disc.radial_weight)
            .map(|((p, &x), s)| (s * (p.cosh() - exact_w(eta, x))).abs())
            .fold(0.0, f64::max);
        rows.push(MmsRow { n, error, iterations });
    }
    let orders = rows.windows(2).map(|w| (w[0].error / w[1].error).log2()).collect();
    Ok(MmsTable { eta, mu, rows, orders })
}
