//! Discrete residual of the regularised problem in the variable
//! `psi = acosh(phi / sqrt(1 + |xi|^2))`, and its exact linearisation.
//!
//! Derivatives are taken on `w = cosh(psi)` and converted to psi-jets node
//! by node. At `mu = 0` the w-equation is linear, so the psi rows then are
//! pointwise positive multiples of a linear system in w.

use nalgebra::{Matrix2, Vector2};
use rayon::prelude::*;

use super::linear::SparseSystem;
use crate::error::{Error, Result};
use crate::mesh::{build_stencils, corner_laplacian, Grid, NodeStencil, NodeTag, SideMode};
use crate::oracle::{exact_w, sonic_w};

/// Boundary data of the discrete problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryData {
    /// Neumann on the straight sides, `phi = sqrt(1+|xi|^2) + eps` on the
    /// sonic arc, `Dphi = 0` at O.
    Physical,
    /// Dirichlet data from the exact solution `w^eta` on every boundary node.
    Manufactured { eta: [f64; 3] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// Storage slot duplicating O: `psi_k - psi_O = 0`.
    Placeholder,
    Dirichlet,
    Pde,
    Corner,
}

/// Pointwise operator value and partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdePoint {
    pub f: f64,
    pub f_psi: f64,
    pub f_g: Vector2<f64>,
    pub f_h: Matrix2<f64>,
}

/// Quasilinear operator for psi at one point, with `g = Dpsi`, `h = D^2 psi`.
pub fn pde_point(xi: Vector2<f64>, psi: f64, g: Vector2<f64>, h: Matrix2<f64>, mu: f64) -> PdePoint {
    let w = 1.0 + xi.norm_squared();
    let gx = g.dot(&xi);
    let m = w * (g.norm_squared() + gx * gx);
    let b = g + xi * gx;
    let a = Matrix2::identity() + xi * xi.transpose();
    let q = h.trace() + xi.dot(&(h * xi));
    let hb = h * b;
    let th = psi.tanh();
    let sh = psi.sinh();
    let lam = 1.0 + (1.0 - mu) * m;
    let zero = (1.0 + m) * (2.0 + (1.0 - mu) * m);
    PdePoint {
        f: (1.0 + m) * q - mu * w * b.dot(&hb) + 2.0 * lam * gx + zero / (w * th),
        f_psi: -zero / (w * sh * sh),
        f_g: b * (2.0 * w * q) - a * hb * (2.0 * mu * w)
            + b * (4.0 * (1.0 - mu) * w * gx)
            + xi * (2.0 * lam)
            + b * (2.0 * ((2.0 + (1.0 - mu) * m) + (1.0 + m) * (1.0 - mu)) / th),
        f_h: a * (1.0 + m) - b * b.transpose() * (mu * w),
    }
}

/// Grid, stencils and boundary data of one discrete problem.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub grid: Grid,
    pub boundary: BoundaryData,
    pub stencils: Vec<Option<NodeStencil>>,
    pub corner: Vec<(usize, f64)>,
    pub kinds: Vec<RowKind>,
    pub row_scale: Vec<f64>,
    /// `sqrt(1 + |xi|^2)` per node.
    pub radial_weight: Vec<f64>,
}

/// Residual and Jacobian at one state.
#[derive(Debug, Clone)]
pub struct Linearization {
    pub residual: Vec<f64>,
    pub jacobian: SparseSystem,
}

impl Discretization {
    pub fn new(grid: Grid, boundary: BoundaryData) -> Self {
        let mode = match boundary {
            BoundaryData::Physical => SideMode::Reflect,
            BoundaryData::Manufactured { .. } => SideMode::OneSided,
        };
        let stencils = build_stencils(&grid, mode);
        let corner = corner_laplacian(&grid);
        let n = grid.len();
        let mut kinds = Vec::with_capacity(n);
        let mut row_scale = Vec::with_capacity(n);
        for k in 0..n {
            let tag = grid.tags[k];
            let kind = if grid.is_placeholder(k) {
                RowKind::Placeholder
            } else {
                match (boundary, tag) {
                    (_, NodeTag::Degenerate) => RowKind::Dirichlet,
                    (BoundaryData::Manufactured { .. }, NodeTag::Interior) => RowKind::Pde,
                    (BoundaryData::Manufactured { .. }, _) => RowKind::Dirichlet,
                    (BoundaryData::Physical, NodeTag::CornerO) => RowKind::Corner,
                    (BoundaryData::Physical, _) => RowKind::Pde,
                }
            };
            kinds.push(kind);
            // Unit total second-difference weight keeps every row O(1), so the
            // rounding floor of the residual sits near machine precision.
            row_scale.push(match kind {
                RowKind::Pde => {
                    let st = stencils[k].as_ref().expect("stencil at every j >= 1 node");
                    1.0 / st.entries.iter().map(|e| e.b.abs().sum()).sum::<f64>()
                }
                RowKind::Corner => 1.0 / corner.iter().map(|c| c.1.abs()).sum::<f64>(),
                _ => 1.0,
            });
        }
        let radial_weight = grid.nodes.iter().map(|x| (1.0 + x[0] * x[0] + x[1] * x[1]).sqrt()).collect();
        Self { grid, boundary, stencils, corner, kinds, row_scale, radial_weight }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Dirichlet value of psi at node `k`.
    pub fn dirichlet_psi(&self, k: usize, eps: f64) -> f64 {
        self.dirichlet_w(k, eps).acosh()
    }

    /// Dirichlet value of w at node `k`.
    pub fn dirichlet_w(&self, k: usize, eps: f64) -> f64 {
        match self.boundary {
            BoundaryData::Physical => sonic_w(self.grid.nodes[k], eps),
            BoundaryData::Manufactured { eta } => exact_w(eta, self.grid.nodes[k]),
        }
    }

    /// Lower clamp for psi during Newton iterations.
    pub fn psi_floor(&self, eps: f64) -> f64 {
        match self.boundary {
            BoundaryData::Physical => super::SolverConfig::psi_floor(eps),
            BoundaryData::Manufactured { .. } => {
                let min = (0..self.len())
                    .filter(|&k| self.kinds[k] == RowKind::Dirichlet)
                    .map(|k| self.dirichlet_psi(k, eps))
                    .fold(f64::INFINITY, f64::min);
                0.5 * min
            }
        }
    }

    fn nonfinite(&self, k: usize) -> Error {
        let (i, j) = self.grid.ij(k);
        Error::NonFinite { i, j }
    }

    fn row(&self, k: usize, psi: &[f64], w: &[f64], mu: f64, eps: f64, with_jac: bool) -> Result<(f64, Vec<(usize, f64)>)> {
        let scale = self.row_scale[k];
        let mut jac = Vec::new();
        let value = match self.kinds[k] {
            RowKind::Placeholder => {
                if with_jac {
                    jac.push((k, 1.0));
                    jac.push((0, -1.0));
                }
                psi[k] - psi[0]
            }
            RowKind::Dirichlet => {
                if with_jac {
                    jac.push((k, 1.0));
                }
                psi[k] - self.dirichlet_psi(k, eps)
            }
            RowKind::Corner => {
                let (s0, c0) = (psi[0].sinh(), psi[0].cosh());
                let lap: f64 = self.corner.iter().map(|&(n, c)| c * w[n]).sum();
                if with_jac {
                    for &(n, c) in &self.corner {
                        if n != 0 {
                            jac.push((n, scale * c * psi[n].sinh() / s0));
                        }
                    }
                    let c_self: f64 = self.corner.iter().filter(|t| t.0 == 0).map(|t| t.1).sum();
                    let d0 = c_self - lap * c0 / (s0 * s0) - 2.0 / (s0 * s0);
                    jac.push((0, scale * d0));
                }
                scale * (lap / s0 + 2.0 * c0 / s0)
            }
            RowKind::Pde => {
                let st = self.stencils[k].as_ref().expect("stencil at every j >= 1 node");
                let (dw, d2w) = st.apply(w);
                let (si, ci) = (psi[k].sinh(), psi[k].cosh());
                let g = dw / si;
                let h = (d2w - g * g.transpose() * ci) / si;
                let m = &self.grid.metric[k];
                let p = pde_point(m.x, psi[k], g, h, mu);
                if with_jac {
                    if !(p.f_psi < 0.0) {
                        let (i, j) = self.grid.ij(k);
                        return Err(Error::SignCheck { i, j, value: p.f_psi });
                    }
                    let dh_of = |dg: Vector2<f64>, b: Matrix2<f64>| (b - (dg * g.transpose() + g * dg.transpose()) * ci) / si;
                    for e in &st.entries {
                        let sk = psi[e.node].sinh();
                        let dg = e.a * (sk / si);
                        let dh = dh_of(dg, e.b * sk);
                        jac.push((e.node, scale * (p.f_g.dot(&dg) + p.f_h.component_mul(&dh).sum())));
                    }
                    let dg = -g * (ci / si);
                    let dh = dh_of(dg, Matrix2::zeros()) - g * g.transpose() - h * (ci / si);
                    jac.push((k, scale * (p.f_psi + p.f_g.dot(&dg) + p.f_h.component_mul(&dh).sum())));
                }
                scale * p.f
            }
        };
        if !value.is_finite() || jac.iter().any(|(_, v)| !v.is_finite()) {
            return Err(self.nonfinite(k));
        }
        Ok((value, jac))
    }

    pub fn residual(&self, psi: &[f64], mu: f64, eps: f64) -> Result<Vec<f64>> {
        let w: Vec<f64> = psi.iter().map(|p| p.cosh()).collect();
        (0..self.len()).into_par_iter().map(|k| self.row(k, psi, &w, mu, eps, false).map(|r| r.0)).collect()
    }

    pub fn linearize(&self, psi: &[f64], mu: f64, eps: f64) -> Result<Linearization> {
        let w: Vec<f64> = psi.iter().map(|p| p.cosh()).collect();
        let rows: Vec<(f64, Vec<(usize, f64)>)> =
            (0..self.len()).into_par_iter().map(|k| self.row(k, psi, &w, mu, eps, true)).collect::<Result<_>>()?;
        let mut jacobian = SparseSystem::new(self.len());
        let mut residual = Vec::with_capacity(self.len());
        for (k, (v, entries)) in rows.into_iter().enumerate() {
            residual.push(v);
            for (c, val) in entries {
                jacobian.push(k, c, val);
            }
        }
        Ok(Linearization { residual, jacobian })
    }

    /// Initial psi: the lifted boundary value plus a bump of height
    /// `0.1 eps` that vanishes on the sonic arc.
    pub fn initial_guess(&self, eps: f64) -> Vec<f64> {
        let flat = match self.boundary {
            BoundaryData::Physical => None,
            BoundaryData::Manufactured { .. } => Some((2.0 * self.psi_floor(eps)).cosh()),
        };
        (0..self.len())
            .map(|k| {
                let t = self.grid.t[self.grid.ij(k).1];
                let base = flat.unwrap_or(1.0 + eps / self.radial_weight[k]);
                (base + 0.1 * eps * (1.0 - t * t)).acosh()
            })
            .collect()
    }

    /// `min(phi - sqrt(1 + |xi|^2))` over all nodes.
    pub fn ellipticity_margin(&self, psi: &[f64]) -> f64 {
        psi.iter().zip(&self.radial_weight).map(|(p, s)| s * (p.cosh() - 1.0)).fold(f64::INFINITY, f64::min)
    }
}
