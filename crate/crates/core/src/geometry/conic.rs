//! Mach-cone curves and shock lines in the conical `(xi1, xi2)` plane.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Mach cone `l(xi)^2 = 1 + |xi|^2` with `l = p1 xi1 + p2 xi2 + p0`.
///
/// For a uniform state with velocity `v` the linear form is the potential
/// `v1 xi1 + v2 xi2 + v3` itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicCurve {
    pub p1: f64,
    pub p2: f64,
    pub p0: f64,
}

/// Radius of a conic along a ray and its first two angular derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayJet {
    pub r: f64,
    pub r_t: f64,
    pub r_tt: f64,
}

impl ConicCurve {
    pub fn from_velocity(v: [f64; 3]) -> Self {
        Self { p1: v[0], p2: v[1], p0: v[2] }
    }

    pub fn linear(&self, xi: [f64; 2]) -> f64 {
        self.p1 * xi[0] + self.p2 * xi[1] + self.p0
    }

    /// `l^2 - (1 + |xi|^2)`, zero on the curve.
    pub fn residual(&self, xi: [f64; 2]) -> f64 {
        let l = self.linear(xi);
        l * l - 1.0 - xi[0] * xi[0] - xi[1] * xi[1]
    }

    /// Residual scaled so that it is O(1) regardless of where the point is.
    pub fn relative_residual(&self, xi: [f64; 2]) -> f64 {
        self.residual(xi) / (1.0 + xi[0] * xi[0] + xi[1] * xi[1])
    }

    fn slope(&self, theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        (self.p1 * c + self.p2 * s, -self.p1 * s + self.p2 * c)
    }

    /// Distance from O to the curve along direction `(cos theta, sin theta)`:
    /// the far root of `(a t + p0)^2 = 1 + t^2`, in rationalised form, on the
    /// branch where the linear form is positive.
    pub fn ray_radius(&self, theta: f64) -> Result<f64> {
        Ok(self.ray_jet(theta)?.r)
    }

    pub fn ray_jet(&self, theta: f64) -> Result<RayJet> {
        let p0 = self.p0;
        let (a, a1) = self.slope(theta);
        let cc = (p0 - 1.0) * (p0 + 1.0);
        let disc = a * a + cc;
        let miss = || Error::Construction(format!("ray at angle {theta} does not meet the cone {self:?}"));
        if !(disc > 0.0) {
            return Err(miss());
        }
        let s = disc.sqrt();
        let d = s - a * p0;
        let r = cc / d;
        if !(r > 0.0 && r.is_finite() && a * r + p0 > 0.0) {
            return Err(miss());
        }
        let d_t = a1 * (a / s - p0);
        let d_tt = -a * (a / s - p0) + a1 * a1 * cc / (s * s * s);
        Ok(RayJet { r, r_t: -cc * d_t / (d * d), r_tt: -cc * d_tt / (d * d) + 2.0 * cc * d_t * d_t / (d * d * d) })
    }

    pub fn point_at(&self, theta: f64) -> Result<[f64; 2]> {
        let r = self.ray_radius(theta)?;
        Ok([r * theta.cos(), r * theta.sin()])
    }

    /// Unit tangent direction of the curve at angle `theta` (counter-clockwise).
    pub fn tangent_at(&self, theta: f64) -> Result<[f64; 2]> {
        let j = self.ray_jet(theta)?;
        let (s, c) = theta.sin_cos();
        let t = [j.r_t * c - j.r * s, j.r_t * s + j.r * c];
        let n = t[0].hypot(t[1]);
        Ok([t[0] / n, t[1] / n])
    }
}

/// Shock line `n1 xi1 + n2 xi2 + d = 0` together with the unit normal of the
/// 3D shock plane through the apex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockLine {
    pub n1: f64,
    pub n2: f64,
    pub d: f64,
    pub normal: [f64; 3],
}

impl ShockLine {
    /// Line where the potentials of two uniform states agree:
    /// `(v+ - v-) . (xi, 1) = 0`.
    pub fn between(upstream: [f64; 3], downstream: [f64; 3]) -> Result<Self> {
        let k = [downstream[0] - upstream[0], downstream[1] - upstream[1], downstream[2] - upstream[2]];
        let norm = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        if norm < 1e-14 {
            return Err(Error::Degenerate("no velocity jump across the shock".into()));
        }
        Ok(Self { n1: k[0], n2: k[1], d: k[2], normal: [k[0] / norm, k[1] / norm, k[2] / norm] })
    }

    pub fn eval(&self, xi: [f64; 2]) -> f64 {
        self.n1 * xi[0] + self.n2 * xi[1] + self.d
    }

    /// Intersection with the ray from O in direction `dir`, as a distance.
    pub fn ray_distance(&self, dir: [f64; 2]) -> Option<f64> {
        let den = self.n1 * dir[0] + self.n2 * dir[1];
        if den.abs() < 1e-300 {
            return None;
        }
        let t = -self.d / den;
        (t.is_finite()).then_some(t)
    }
}

/// Double root of a line with a tangent conic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tangency {
    pub point: [f64; 2],
    /// Discriminant divided by the squared largest coefficient.
    pub residual: f64,
}

/// Substitutes the line into the conic's quadratic and returns the double
/// root. Fails when the relative discriminant exceeds `1e-9`.
pub fn tangency_point(line: &ShockLine, conic: &ConicCurve) -> Result<Tangency> {
    let t = tangency_unchecked(line, conic)?;
    if t.residual.abs() > 1e-9 {
        return Err(Error::Construction(format!(
            "line is not tangent to the cone (relative discriminant {:e})",
            t.residual
        )));
    }
    Ok(t)
}

pub(crate) fn tangency_unchecked(line: &ShockLine, conic: &ConicCurve) -> Result<Tangency> {
    let nn = line.n1 * line.n1 + line.n2 * line.n2;
    if nn < 1e-28 {
        return Err(Error::Degenerate("shock line has no in-plane normal".into()));
    }
    let nl = nn.sqrt();
    let dir = [-line.n2 / nl, line.n1 / nl];
    let x0 = [-line.d * line.n1 / nn, -line.d * line.n2 / nn];
    let pd = conic.p1 * dir[0] + conic.p2 * dir[1];
    let px = conic.linear(x0);
    let a = pd * pd - 1.0;
    let b = 2.0 * (pd * px - (x0[0] * dir[0] + x0[1] * dir[1]));
    let c = px * px - 1.0 - x0[0] * x0[0] - x0[1] * x0[1];
    if a.abs() < 1e-300 {
        return Err(Error::Degenerate("line is parallel to an asymptote of the cone".into()));
    }
    let scale = a.abs().max(b.abs()).max(c.abs());
    let t = -b / (2.0 * a);
    Ok(Tangency { point: [x0[0] + t * dir[0], x0[1] + t * dir[1]], residual: (b * b - 4.0 * a * c) / (scale * scale) })
}
