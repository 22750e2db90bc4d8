use std::sync::Arc;

use nalgebra::{SMatrix, SVector, Vector2};
use serde::{Deserialize, Serialize};

use super::continuation::StageRecord;
use super::operator::{BoundaryData, Discretization};
use crate::error::{Error, Result};
use crate::gas::GasConstants;
use crate::mesh::Grid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDiagnostics {
    pub stages: Vec<StageRecord>,
    /// Residual infinity norm of the discrete system at the returned psi.
    pub residual: f64,
    /// `min(phi - sqrt(1 + |xi|^2))`.
    pub ellipticity_margin: f64,
}

/// Nodal fields of one converged solve.
#[derive(Debug, Clone)]
pub struct SolutionField {
    pub grid: Arc<Grid>,
    pub psi: Vec<f64>,
    pub w: Vec<f64>,
    pub phi: Vec<f64>,
    /// `(d1 phi, d2 phi, phi - Dphi . xi)`.
    pub velocity: Vec<[f64; 3]>,
    pub c: Vec<f64>,
    pub rho: Vec<f64>,
    /// Pseudo-Mach ratio; below 1 where the equation is elliptic.
    pub l2: Vec<f64>,
    pub mu: f64,
    pub eps: f64,
    pub diagnostics: FieldDiagnostics,
}

impl SolutionField {
    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }
}

/// Gradient of `u` at O by a least-squares quadratic fit over two rings.
fn corner_gradient(grid: &Grid, u: &[f64]) -> Vector2<f64> {
    let mut ata = SMatrix::<f64, 5, 5>::zeros();
    let mut atb = SVector::<f64, 5>::zeros();
    for j in 1..=2 {
        for i in 0..grid.ns {
            let k = grid.idx(i, j);
            let [x, y] = grid.nodes[k];
            let row = SVector::<f64, 5>::from([x, y, 0.5 * x * x, x * y, 0.5 * y * y]);
            ata += row * row.transpose();
            atb += row * (u[k] - u[0]);
        }
    }
    let sol = ata.lu().solve(&atb).unwrap_or_else(SVector::zeros);
    Vector2::new(sol[0], sol[1])
}

/// Physical fields from psi.
pub fn reconstruct_fields(
    disc: &Discretization,
    psi: &[f64],
    mu: f64,
    eps: f64,
    gas: &GasConstants,
    stages: Vec<StageRecord>,
) -> Result<SolutionField> {
    let grid = &disc.grid;
    let n = grid.len();
    let w: Vec<f64> = psi.iter().map(|p| p.cosh()).collect();
    let phi: Vec<f64> = w.iter().zip(&disc.radial_weight).map(|(w, s)| w * s).collect();
    let mut velocity = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    let mut rho = Vec::with_capacity(n);
    let mut l2 = Vec::with_capacity(n);
    let dw_o = match disc.boundary {
        BoundaryData::Physical => Vector2::zeros(),
        BoundaryData::Manufactured { .. } => corner_gradient(grid, &w),
    };
    for k in 0..n {
        let x = grid.metric[k].x;
        let s = disc.radial_weight[k];
        let dw = match &disc.stencils[k] {
            Some(st) if !grid.is_placeholder(k) => st.gradient(&w),
            _ => dw_o,
        };
        let dphi = x * (w[k] / s) + dw * s;
        let v = [dphi[0], dphi[1], phi[k] - dphi.dot(&x)];
        let q2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        let c2 = q2 - 1.0;
        if !(c2 > 0.0) {
            let (i, j) = grid.ij(k);
            return Err(Error::EllipticityLost { i, j, c2 });
        }
        let ck = c2.sqrt();
        velocity.push(v);
        c.push(ck);
        rho.push(gas.a / ck);
        l2.push((q2 - phi[k] * phi[k] / (s * s)) / c2);
    }
    let residual = disc.residual(psi, mu, eps)?.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(SolutionField {
        grid: Arc::new(grid.clone()),
        psi: psi.to_vec(),
        w,
        phi,
        velocity,
        c,
        rho,
        l2,
        mu,
        eps,
        diagnostics: FieldDiagnostics { stages, residual, ellipticity_margin: disc.ellipticity_margin(psi) },
    })
}
