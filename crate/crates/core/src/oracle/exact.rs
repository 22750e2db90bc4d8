use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient vector of the exact solution `w = eta . (xi, 1) / sqrt(1 + |xi|^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaVector(pub [f64; 3]);

impl EtaVector {
    pub fn new(eta: [f64; 3]) -> Result<Self> {
        if eta.iter().any(|v| !v.is_finite()) || eta.iter().all(|v| *v == 0.0) {
            return Err(Error::invalid("eta", "must be finite and nonzero"));
        }
        Ok(Self(eta))
    }

    pub fn eval(&self, xi: [f64; 2]) -> f64 {
        exact_w(self.0, xi)
    }
}

/// Value, gradient and Hessian of a function of `xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: Vector2<f64>,
    pub hess: Matrix2<f64>,
}

pub fn exact_w(eta: [f64; 3], xi: [f64; 2]) -> f64 {
    (eta[0] * xi[0] + eta[1] * xi[1] + eta[2]) / (1.0 + xi[0] * xi[0] + xi[1] * xi[1]).sqrt()
}

/// Jet of `w^eta`. With `l` the linear numerator and `s = sqrt(W)`,
/// `Dw = p/s - l xi/s^3` and
/// `D^2 w = -(p xi^T + xi p^T)/s^3 - l I/s^3 + 3 l xi xi^T/s^5`.
pub fn exact_jet(eta: [f64; 3], xi: [f64; 2]) -> Jet {
    let x = Vector2::new(xi[0], xi[1]);
    let p = Vector2::new(eta[0], eta[1]);
    let l = p.dot(&x) + eta[2];
    let s = (1.0 + x.norm_squared()).sqrt();
    let s3 = s * s * s;
    let grad = p / s - x * (l / s3);
    let hess = -(p * x.transpose() + x * p.transpose()) / s3 - Matrix2::identity() * (l / s3)
        + x * x.transpose() * (3.0 * l / (s3 * s * s));
    Jet { value: l / s, grad, hess }
}

/// Pointwise value of the continuous w-equation, with the sound speed
/// computed from the potential `phi = sqrt(W) w`.
pub fn w_equation_residual(jet: &Jet, xi: [f64; 2], mu: f64) -> f64 {
    let x = Vector2::new(xi[0], xi[1]);
    let ww = 1.0 + x.norm_squared();
    let s = ww.sqrt();
    let w = jet.value;
    let dw = jet.grad;
    let dphi = x * (w / s) + dw * s;
    let v3 = w / s - s * dw.dot(&x);
    let c2 = dphi.norm_squared() + v3 * v3 - 1.0;
    let h = &jet.hess;
    let b = dw + x * dw.dot(&x);
    let q = h.trace() + x.dot(&(h * x));
    c2 * q - mu * ww * b.dot(&(h * b))
        + 2.0 * ((1.0 - mu) * c2 + mu * (w * w - 1.0)) * dw.dot(&x)
        + ((2.0 - mu) * c2 + mu * (w * w - 1.0)) * w / ww
}
