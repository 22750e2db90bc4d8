//! Chaplygin gas thermodynamics under the normalisation `q^2 - c^2 = 1`.
//!
//! The state equation is `p = a^2 (1/rho_* - 1/rho)`, so `rho c = a` and
//! Bernoulli's law with constant 1/2 reads `q^2 - c^2 = 1`. Every velocity
//! produced by this crate is scaled so that this holds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasConstants {
    /// Pressure-density scale of the state equation.
    pub a: f64,
    /// Reference density (zero pressure).
    pub rho_star: f64,
}

impl Default for GasConstants {
    fn default() -> Self {
        Self { a: 1.0, rho_star: 1.0 }
    }
}

impl GasConstants {
    pub fn new(a: f64, rho_star: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::invalid("a", format!("must be positive, got {a}")));
        }
        if !(rho_star > 0.0 && rho_star.is_finite()) {
            return Err(Error::invalid("rho_star", format!("must be positive, got {rho_star}")));
        }
        Ok(Self { a, rho_star })
    }

    /// Local density from the local speed, `rho = a / sqrt(q^2 - 1)`.
    pub fn density_from_speed(&self, q: f64) -> Result<f64> {
        if !(q > 1.0) {
            return Err(Error::invalid("q", format!("speed must exceed 1 under the normalisation, got {q}")));
        }
        Ok(self.a / sound_speed_from_speed(q))
    }

    /// `p = a^2 (1/rho_* - 1/rho)`; negative values are physical for this gas.
    pub fn pressure(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(Error::invalid("rho", format!("density must be positive, got {rho}")));
        }
        Ok(self.a * self.a * (1.0 / self.rho_star - 1.0 / rho))
    }
}

/// `c = sqrt(q^2 - 1)`, written as a product to keep precision near `q = 1`.
pub fn sound_speed_from_speed(q: f64) -> f64 {
    ((q - 1.0) * (q + 1.0)).sqrt()
}

/// Normalised incoming flow. Constructed only through [`FreeStream::new`],
/// which derives the sound speed from `q_inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeStream {
    pub gas: GasConstants,
    pub q_inf: f64,
    pub c_inf: f64,
    pub rho_inf: f64,
    /// Attack angle in radians.
    pub alpha: f64,
    pub v1_inf: f64,
    pub v3_inf: f64,
}

impl FreeStream {
    pub fn new(q_inf: f64, alpha: f64, gas: GasConstants) -> Result<Self> {
        if !(q_inf > 1.0 && q_inf.is_finite()) {
            return Err(Error::invalid("q_inf", format!("must satisfy q_inf > 1, got {q_inf}")));
        }
        if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2) {
            return Err(Error::invalid("alpha", format!("must lie in (0, pi/2), got {alpha}")));
        }
        let c_inf = sound_speed_from_speed(q_inf);
        Ok(Self {
            gas,
            q_inf,
            c_inf,
            rho_inf: gas.a / c_inf,
            alpha,
            v1_inf: q_inf * alpha.sin(),
            v3_inf: q_inf * alpha.cos(),
        })
    }

    pub fn velocity(&self) -> [f64; 3] {
        [self.v1_inf, 0.0, self.v3_inf]
    }
}

/// Free-function form of [`FreeStream::new`].
pub fn normalize_freestream(q_inf: f64, alpha: f64, gas: GasConstants) -> Result<FreeStream> {
    FreeStream::new(q_inf, alpha, gas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn freestream_examples() {
        let fs = FreeStream::new(2.0, FRAC_PI_6, GasConstants::default()).unwrap();
        assert_relative_eq!(fs.c_inf, 3f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(fs.rho_inf, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(fs.v1_inf, 1.0, epsilon = 1e-15);
        assert_relative_eq!(fs.v3_inf, 3f64.sqrt(), epsilon = 1e-15);

        let fs = FreeStream::new(2f64.sqrt(), FRAC_PI_4, GasConstants::default()).unwrap();
        assert_relative_eq!(fs.c_inf, 1.0, epsilon = 1e-15);
        assert_relative_eq!(fs.rho_inf, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_sonic_and_bad_angles() {
        let g = GasConstants::default();
        assert!(FreeStream::new(1.0, 0.3, g).is_err());
        assert!(FreeStream::new(0.5, 0.3, g).is_err());
        assert!(FreeStream::new(2.0, 0.0, g).is_err());
        assert!(FreeStream::new(2.0, std::f64::consts::FRAC_PI_2, g).is_err());
    }

    #[test]
    fn density_examples() {
        let g = GasConstants::default();
        assert_relative_eq!(g.density_from_speed(2.0).unwrap(), 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(g.density_from_speed(2f64.sqrt()).unwrap(), 1.0, epsilon = 1e-14);
        // a / sqrt(q^2 - 1) with q = 1 + 1e-7: q^2 - 1 = 2e-7 + 1e-14 exactly.
        let expected = 1.0 / (2.0e-7f64 + 1.0e-14).sqrt();
        assert_relative_eq!(g.density_from_speed(1.000_000_1).unwrap(), expected, max_relative = 1e-8);
        assert_relative_eq!(expected, 2236.067, max_relative = 1e-6);
        assert!(g.density_from_speed(1.0).is_err());
    }

    #[test]
    fn pressure_examples() {
        let g = GasConstants::default();
        assert_eq!(g.pressure(1.0).unwrap(), 0.0);
        assert_relative_eq!(g.pressure(2.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(g.pressure(1.0 / 3f64.sqrt()).unwrap(), 1.0 - 3f64.sqrt(), epsilon = 1e-15);
        assert!(g.pressure(0.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn bernoulli_and_rho_c(q in 1.0001f64..20.0, alpha in 0.01f64..1.5, a in 0.1f64..5.0) {
            let fs = FreeStream::new(q, alpha, GasConstants::new(a, 1.0).unwrap()).unwrap();
            proptest::prop_assert!((fs.q_inf * fs.q_inf - fs.c_inf * fs.c_inf - 1.0).abs() < 1e-12 * q * q);
            proptest::prop_assert!((fs.rho_inf * fs.c_inf - a).abs() < 1e-12 * a);
            let c = 2.5f64 * q;
            let rho = fs.gas.density_from_speed((1.0 + c * c).sqrt()).unwrap();
            proptest::prop_assert!((rho * c - a).abs() < 1e-12 * a);
        }
    }
}
