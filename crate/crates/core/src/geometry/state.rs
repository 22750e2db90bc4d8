//! Uniform states behind the attached and the reflected shocks.

use serde::{Deserialize, Serialize};

use super::conic::{ConicCurve, ShockLine};
use super::WingAngles;
use crate::error::{Error, Result};
use crate::gas::FreeStream;
use crate::polar::{self, shock_angle};

/// Orthonormal frame attached to the right leading edge: `e_i` along the
/// wing's span direction in the cross plane, `e_j` along the leading edge,
/// `e_k` normal to the wing surface.
pub fn wing_basis(angles: WingAngles) -> [[f64; 3]; 3] {
    let (sb, cb) = angles.beta.sin_cos();
    let (ss, cs) = angles.sigma.sin_cos();
    [[cb, sb, 0.0], [-cs * sb, cs * cb, ss], [ss * sb, -ss * cb, cs]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DownstreamUniform {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub c: f64,
    /// Downstream speed in the plane normal to the leading edge.
    pub q_j: f64,
    /// Upstream speed in the plane normal to the leading edge.
    pub q_tilde: f64,
    pub theta_n: f64,
}

impl DownstreamUniform {
    pub fn velocity(&self) -> [f64; 3] {
        [self.v1, self.v2, self.v3]
    }
}

/// `q~ = |v_inf - (v_inf . e_j) e_j|`, the incoming speed normal to the edge.
pub fn normal_speed(fs: &FreeStream, angles: WingAngles) -> f64 {
    let (sb, cb) = angles.beta.sin_cos();
    let (ss, cs) = angles.sigma.sin_cos();
    (fs.v1_inf * cb).hypot(fs.v1_inf * ss * sb + fs.v3_inf * cs)
}

/// Deflection in the normal plane imposed by the wing surface.
pub fn normal_deflection(fs: &FreeStream, angles: WingAngles) -> f64 {
    let (sb, cb) = angles.beta.sin_cos();
    let (ss, cs) = angles.sigma.sin_cos();
    (cb / (ss * sb + cs / fs.alpha.tan())).atan()
}

/// `c_inf < q~ < c_inf / sin(theta_n)`.
pub fn concentration_check(fs: &FreeStream, angles: WingAngles) -> bool {
    polar::admissible(normal_speed(fs, angles), fs.c_inf, normal_deflection(fs, angles))
}

pub fn downstream_state(fs: &FreeStream, angles: WingAngles) -> Result<DownstreamUniform> {
    let q_tilde = normal_speed(fs, angles);
    let theta_n = normal_deflection(fs, angles);
    let st = polar::polar_state(q_tilde, fs.c_inf, theta_n)?;
    let q_j = st.speed();
    let (sb, cb) = angles.beta.sin_cos();
    let (ss, cs) = angles.sigma.sin_cos();
    let (v1i, v3i) = (fs.v1_inf, fs.v3_inf);
    Ok(DownstreamUniform {
        v1: v1i * cs * cs * sb * sb - v3i * ss * cs * sb + q_j * ss * sb,
        v2: -v1i * cs * cs * sb * cb + v3i * ss * cs * cb - q_j * ss * cb,
        v3: -v1i * cs * ss * sb + v3i * ss * ss + q_j * cs,
        c: st.c1,
        q_j,
        q_tilde,
        theta_n,
    })
}

/// Uniform state behind the reflected shock (`v2R = 0` by symmetry).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResultingUniform {
    pub v1r: f64,
    pub v3r: f64,
    pub cr: f64,
    /// Speed of the attached-shock state perpendicular to the line `L_R`.
    pub q_tilde_sigma: f64,
    pub theta_n_prime: f64,
    pub q_jr: f64,
}

impl ResultingUniform {
    pub fn velocity(&self) -> [f64; 3] {
        [self.v1r, 0.0, self.v3r]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reflection {
    pub state: ResultingUniform,
    pub shock: ShockLine,
    pub cone: ConicCurve,
    /// `xi1` coordinate where the two attached shocks meet the symmetry axis.
    pub k: f64,
}

/// Reflected shock off the symmetry plane for `beta > beta_c`.
///
/// The two attached shocks meet along the line `L_R` through `(k, 0, 1)`.
/// The attached state is split into its component along `L_R` (kept) and
/// the part normal to it, which the planar polar turns parallel to the
/// symmetry plane.
pub fn resulting_shock_state(fs: &FreeStream, state: &DownstreamUniform) -> Result<Reflection> {
    let dv1 = state.v1 - fs.v1_inf;
    if dv1.abs() < 1e-14 {
        return Err(Error::Construction("attached shocks do not meet the symmetry axis".into()));
    }
    let k = -(state.v3 - fs.v3_inf) / dv1;
    if !(k < 0.0 && k.is_finite()) {
        return Err(Error::Construction(format!("attached shocks meet at xi1 = {k}, not on the negative axis")));
    }
    let nk = (1.0 + k * k).sqrt();
    let d = [k / nk, 0.0, 1.0 / nk];
    let ek = [1.0 / nk, 0.0, -k / nk];
    let v = state.velocity();
    let u_k = v[0] * ek[0] + v[2] * ek[2];
    let u_i = -v[1];
    let q_tilde_sigma = u_k.hypot(u_i);
    let theta_n_prime = u_i.abs().atan2(u_k);
    shock_angle(q_tilde_sigma, state.c)?;
    let st = polar::polar_state(q_tilde_sigma, state.c, theta_n_prime)?;
    let q_jr = st.speed();
    let along = v[0] * d[0] + v[2] * d[2];
    let vr = [along * d[0] + q_jr * ek[0], 0.0, along * d[2] + q_jr * ek[2]];
    let state_r = ResultingUniform { v1r: vr[0], v3r: vr[2], cr: st.c1, q_tilde_sigma, theta_n_prime, q_jr };
    Ok(Reflection {
        state: state_r,
        shock: ShockLine::between(v, vr)?,
        cone: ConicCurve::from_velocity(vr),
        k,
    })
}
