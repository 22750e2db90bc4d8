//! Planar Chaplygin shock relations.
//!
//! Every Chaplygin shock is a characteristic: the shock line is tangent to
//! the sonic circle of the state on either side. For an upstream state
//! `(u0, 0)` with sound speed `c0` this fixes the shock angle at
//! `gamma = asin(c0 / u0)` independently of the deflection, and the
//! downstream state moves along a straight polar as `theta` grows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarState {
    pub u1: f64,
    pub v1: f64,
    pub c1: f64,
    pub gamma: f64,
    pub theta: f64,
}

impl PolarState {
    /// Speed of the downstream state in the polar plane.
    pub fn speed(&self) -> f64 {
        self.u1.hypot(self.v1)
    }
}

pub fn shock_angle(u0: f64, c0: f64) -> Result<f64> {
    if !(c0 > 0.0 && u0 > c0) || !u0.is_finite() {
        return Err(Error::SubsonicNormalFlow { u0, c0 });
    }
    Ok((c0 / u0).asin())
}

/// `c0 < u0 < c0 / sin(theta)` with `theta` in `(0, pi/2)`.
pub fn admissible(u0: f64, c0: f64, theta: f64) -> bool {
    c0 > 0.0
        && theta > 0.0
        && theta < std::f64::consts::FRAC_PI_2
        && u0 > c0
        && u0 < c0 / theta.sin()
}

pub fn polar_state(u0: f64, c0: f64, theta: f64) -> Result<PolarState> {
    let gamma = shock_angle(u0, c0)?;
    if !(theta > 0.0) {
        return Err(Error::invalid("theta", format!("deflection must be positive, got {theta}")));
    }
    if !admissible(u0, c0, theta) {
        return Err(Error::Concentration { theta, gamma });
    }
    let s = ((u0 - c0) * (u0 + c0)).sqrt();
    let t = theta.tan();
    let d = s + c0 * t;
    let u1 = u0 * s / d;
    Ok(PolarState { u1, v1: u1 * t, c1: (c0 - t * s) * s / d, gamma, theta })
}

/// Zero-deflection limit of [`polar_state`]: the upstream state itself.
pub fn polar_state_limit(u0: f64, c0: f64) -> Result<PolarState> {
    let gamma = shock_angle(u0, c0)?;
    Ok(PolarState { u1: u0, v1: 0.0, c1: c0, gamma, theta: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    #[test]
    fn shock_angle_examples() {
        assert_relative_eq!(shock_angle(2.0, 3f64.sqrt()).unwrap(), FRAC_PI_3, epsilon = 1e-15);
        assert_relative_eq!(shock_angle(2.0, 1.0).unwrap(), FRAC_PI_6, epsilon = 1e-15);
        assert!(matches!(shock_angle(1.0, 1.0), Err(Error::SubsonicNormalFlow { .. })));
    }

    #[test]
    fn polar_spot_value() {
        let st = polar_state(2.0, 3f64.sqrt(), FRAC_PI_6).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert_relative_eq!(st.u1, 1.0, epsilon = 1e-14);
        assert_relative_eq!(st.v1, r, epsilon = 1e-14);
        assert_relative_eq!(st.c1, r, epsilon = 1e-14);
    }

    #[test]
    fn zero_deflection_limit() {
        let c0 = 3f64.sqrt();
        let lim = polar_state_limit(2.0, c0).unwrap();
        assert_eq!((lim.u1, lim.v1, lim.c1), (2.0, 0.0, c0));
        let st = polar_state(2.0, c0, 1e-9).unwrap();
        assert!((st.u1 - 2.0).abs() < 1e-8 && st.v1.abs() < 1e-8 && (st.c1 - c0).abs() < 1e-8);
    }

    #[test]
    fn concentration_boundary() {
        let err = polar_state(2.0, 3f64.sqrt(), FRAC_PI_3).unwrap_err();
        assert!(matches!(err, Error::Concentration { .. }));
        assert!(polar_state(2.0, 3f64.sqrt(), 0.0).is_err());
    }

    #[test]
    fn admissible_examples() {
        let c0 = 3f64.sqrt();
        assert!(admissible(2.0, c0, FRAC_PI_6));
        assert!(!admissible(2.0, c0, FRAC_PI_3 + 1e-12));
        assert!(!admissible(1.5, c0, 0.1));
    }

    #[test]
    fn c1_decreases_to_zero() {
        let (u0, c0) = (2.0, 3f64.sqrt());
        let g = shock_angle(u0, c0).unwrap();
        let mut prev = c0;
        for k in 1..200 {
            let st = polar_state(u0, c0, g * k as f64 / 200.0).unwrap();
            assert!(st.c1 < prev && st.v1 > 0.0);
            prev = st.c1;
        }
        assert!(polar_state(u0, c0, g * (1.0 - 1e-10)).unwrap().c1 < 1e-8);
    }

    proptest! {
        #[test]
        fn bernoulli_and_tangency(c0 in 0.1f64..5.0, ratio in 1.001f64..6.0, frac in 0.001f64..0.999) {
            let u0 = c0 * ratio;
            let g = shock_angle(u0, c0).unwrap();
            let st = polar_state(u0, c0, g * frac).unwrap();
            let scale = u0 * u0;
            prop_assert!((st.u1 * st.u1 + st.v1 * st.v1 - st.c1 * st.c1 - (u0 * u0 - c0 * c0)).abs() < 1e-12 * scale);
            prop_assert!((st.u1 * g.sin() - st.v1 * g.cos() - st.c1).abs() < 1e-12 * u0);
            prop_assert!(st.c1 > 0.0);
        }
    }
}
