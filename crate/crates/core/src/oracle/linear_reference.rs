//! Direct solve of the `mu = 0` problem as one linear system.
//!
//! At `mu = 0` the potential equation `Delta phi + D^2 phi[xi, xi] = 0` is
//! linear, and so is its form in `w = phi / sqrt(1 + |xi|^2)`:
//! `(I + xi xi^T) : D^2 w + 2 Dw . xi + 2 w / (1 + |xi|^2) = 0`.
//! The system below uses the nodal stencils of the given discretization
//! applied to w, so on a matched grid it is the exact linear problem whose
//! solution the psi iteration approaches.

use nalgebra::Matrix2;

use crate::error::Result;
use crate::solver::{Discretization, RowKind, SparseSystem};

/// Returns nodal `phi` solving the discrete linear problem.
pub fn linear_reference(disc: &Discretization, eps: f64) -> Result<Vec<f64>> {
    let grid = &disc.grid;
    let n = grid.len();
    let mut sys = SparseSystem::new(n);
    let mut rhs = vec![0.0; n];
    for k in 0..n {
        match disc.kinds[k] {
            RowKind::Placeholder => {
                sys.push(k, k, 1.0);
                sys.push(k, 0, -1.0);
            }
            RowKind::Dirichlet => {
                sys.push(k, k, 1.0);
                rhs[k] = disc.dirichlet_w(k, eps);
            }
            RowKind::Corner => {
                for &(m, c) in &disc.corner {
                    sys.push(k, m, c);
                }
                sys.push(k, 0, 2.0);
            }
            RowKind::Pde => {
                let st = disc.stencils[k].as_ref().expect("stencil at every j >= 1 node");
                let x = grid.metric[k].x;
                let a = Matrix2::identity() + x * x.transpose();
                for e in &st.entries {
                    sys.push(k, e.node, a.component_mul(&e.b).sum() + 2.0 * e.a.dot(&x));
                }
                sys.push(k, k, 2.0 / (1.0 + x.norm_squared()));
            }
        }
    }
    let w = sys.solve(&rhs, 1e-14)?;
    Ok(w.iter().zip(&disc.radial_weight).map(|(w, s)| w * s).collect())
}
