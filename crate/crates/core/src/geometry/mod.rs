//! Uniform flow outside the elliptic region: attached and reflected shock
//! states, Mach cones, key points, critical angles and regime labels.

mod conic;
mod regime;
mod state;

pub use conic::{tangency_point, ConicCurve, RayJet, ShockLine, Tangency};
pub use regime::{
    beta0_function, classify_regime, critical_beta_0, critical_beta_c, key_points, Beta0Search, KeyPoints, Regime, RegimeReport,
    RegimeStates,
};
pub use state::{
    concentration_check, downstream_state, normal_deflection, normal_speed, resulting_shock_state, wing_basis,
    DownstreamUniform, Reflection, ResultingUniform,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::FreeStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WingAngles {
    pub sigma: f64,
    pub beta: f64,
}

impl WingAngles {
    pub fn new(sigma: f64, beta: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < std::f64::consts::FRAC_PI_2) {
            return Err(Error::invalid("sigma", format!("must lie in (0, pi/2), got {sigma}")));
        }
        if !(beta >= 0.0 && beta < std::f64::consts::FRAC_PI_2) {
            return Err(Error::invalid("beta", format!("must lie in [0, pi/2), got {beta}")));
        }
        Ok(Self { sigma, beta })
    }

    /// Unit direction of the wing ray `Gamma_wing` from O.
    pub fn wing_dir(&self) -> [f64; 2] {
        [-self.beta.sin(), self.beta.cos()]
    }

    /// Polar angle of the wing ray.
    pub fn wing_angle(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 + self.beta
    }

    /// Outward normal of the wing side of the elliptic region.
    pub fn wing_normal(&self) -> [f64; 2] {
        [self.beta.cos(), self.beta.sin()]
    }
}

/// Largest attack angle free of concentration, `asin(c_inf / q_inf)`.
pub fn critical_alpha(fs: &FreeStream) -> f64 {
    (fs.c_inf / fs.q_inf).asin()
}

/// Largest sweep angle with an attached shock, `asin(1 / (q_inf cos alpha))`.
pub fn critical_sigma(fs: &FreeStream) -> Result<f64> {
    let arg = 1.0 / (fs.q_inf * fs.alpha.cos());
    if !(arg < 1.0) {
        return Err(Error::invalid(
            "alpha",
            format!("1/(q_inf cos alpha) = {arg} >= 1: no sweep angle keeps the shock attached"),
        ));
    }
    Ok(arg.asin())
}

/// Mach cone of the free stream, `l = v1_inf xi1 + v3_inf`.
pub fn mach_cone_inf(fs: &FreeStream) -> ConicCurve {
    ConicCurve::from_velocity(fs.velocity())
}

pub fn mach_cone_downstream(state: &DownstreamUniform) -> ConicCurve {
    ConicCurve::from_velocity(state.velocity())
}

pub fn shock_line_ob(fs: &FreeStream, state: &DownstreamUniform) -> Result<ShockLine> {
    ShockLine::between(fs.velocity(), state.velocity())
}
