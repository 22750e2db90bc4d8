use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::conic::{tangency_point, ConicCurve, ShockLine};
use super::state::{downstream_state, resulting_shock_state, DownstreamUniform, ResultingUniform};
use super::{critical_alpha, critical_sigma, mach_cone_downstream, mach_cone_inf, shock_line_ob, WingAngles};
use crate::error::{Error, Result};
use crate::gas::FreeStream;

/// Absolute tolerance for angle comparisons.
const ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    DeltaWing,
    Subcritical,
    PlanarShock,
    Reflected,
    BeyondScope,
    ShockDetached,
    Concentration,
}

impl Regime {
    /// Regimes for which an elliptic interior problem is posed.
    pub fn has_interior(self) -> bool {
        matches!(self, Regime::DeltaWing | Regime::Subcritical | Regime::PlanarShock | Regime::Reflected)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Named points of the shock pattern.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct KeyPoints {
    #[serde(rename = "P0", skip_serializing_if = "Option::is_none", default)]
    pub p0: Option<[f64; 2]>,
    #[serde(rename = "P1", skip_serializing_if = "Option::is_none", default)]
    pub p1: Option<[f64; 2]>,
    #[serde(rename = "P2", skip_serializing_if = "Option::is_none", default)]
    pub p2: Option<[f64; 2]>,
    #[serde(rename = "P4", skip_serializing_if = "Option::is_none", default)]
    pub p4: Option<[f64; 2]>,
    #[serde(rename = "P5", skip_serializing_if = "Option::is_none", default)]
    pub p5: Option<[f64; 2]>,
    #[serde(rename = "P6", skip_serializing_if = "Option::is_none", default)]
    pub p6: Option<[f64; 2]>,
    #[serde(rename = "P7", skip_serializing_if = "Option::is_none", default)]
    pub p7: Option<[f64; 2]>,
    #[serde(rename = "PR", skip_serializing_if = "Option::is_none", default)]
    pub pr: Option<[f64; 2]>,
}

impl KeyPoints {
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, [f64; 2])> + '_ {
        [
            ("P0", self.p0),
            ("P1", self.p1),
            ("P2", self.p2),
            ("P4", self.p4),
            ("P5", self.p5),
            ("P6", self.p6),
            ("P7", self.p7),
            ("PR", self.pr),
        ]
        .into_iter()
        .filter_map(|(k, p)| p.map(|p| (k, p)))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RegimeCurves {
    #[serde(rename = "C_inf", skip_serializing_if = "Option::is_none", default)]
    pub c_inf: Option<ConicCurve>,
    #[serde(rename = "C_sigma", skip_serializing_if = "Option::is_none", default)]
    pub c_sigma: Option<ConicCurve>,
    #[serde(rename = "C_sigma_prime", skip_serializing_if = "Option::is_none", default)]
    pub c_sigma_prime: Option<ConicCurve>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RegimeShocks {
    #[serde(rename = "S_ob", skip_serializing_if = "Option::is_none", default)]
    pub s_ob: Option<ShockLine>,
    #[serde(rename = "S_R", skip_serializing_if = "Option::is_none", default)]
    pub s_r: Option<ShockLine>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RegimeStates {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub downstream: Option<DownstreamUniform>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub resulting: Option<ResultingUniform>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportInputs {
    pub q_inf: f64,
    pub alpha: f64,
    pub sigma: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub inputs: ReportInputs,
    pub alpha0: f64,
    pub sigma0: Option<f64>,
    pub beta_c: Option<f64>,
    pub beta0: Option<f64>,
    /// Every root of the `beta0` equation found on the scan.
    pub beta0_roots: Vec<f64>,
    pub points: KeyPoints,
    pub curves: RegimeCurves,
    pub shocks: RegimeShocks,
    pub states: RegimeStates,
    pub diagnostics: Vec<String>,
}

/// `P0, P2, P4, P5, P6` for the attached-shock configuration.
pub fn key_points(fs: &FreeStream, angles: WingAngles, state: &DownstreamUniform) -> Result<KeyPoints> {
    let cinf = mach_cone_inf(fs);
    let csig = mach_cone_downstream(state);
    let line = shock_line_ob(fs, state)?;
    let wing = angles.wing_angle();
    let dir = angles.wing_dir();
    let r2 = cinf.ray_radius(PI)?;
    let r0 = cinf.ray_radius(wing)?;
    let r4 = csig.ray_radius(wing)?;
    let r5 = line
        .ray_distance(dir)
        .filter(|t| *t > 0.0)
        .ok_or_else(|| Error::Construction("attached shock does not cross the wing ray".into()))?;
    if line.n1.abs() < 1e-14 {
        return Err(Error::Construction("attached shock is parallel to the symmetry axis".into()));
    }
    let on = |r: f64| [r * dir[0], r * dir[1]];
    Ok(KeyPoints {
        p0: Some(on(r0)),
        p2: Some([-r2, 0.0]),
        p4: Some(on(r4)),
        p5: Some(on(r5)),
        p6: Some([-line.d / line.n1, 0.0]),
        ..Default::default()
    })
}

/// Anhedral angle at which the attached shock becomes planar,
/// `asin(|OP2| tan sigma)`.
pub fn critical_beta_c(fs: &FreeStream, sigma: f64) -> Result<f64> {
    let r2 = mach_cone_inf(fs).ray_radius(PI)?;
    let arg = r2 * sigma.tan();
    if !(0.0..=1.0).contains(&arg) {
        return Err(Error::invalid("sigma", format!("|OP2| tan(sigma) = {arg} lies outside [0, 1]")));
    }
    Ok(arg.asin())
}

/// `g(beta) = beta - asin(|OP4| / |OP6|)`, with the ratio clamped to 1.
pub fn beta0_function(fs: &FreeStream, sigma: f64, beta: f64) -> Result<f64> {
    let angles = WingAngles { sigma, beta };
    let st = downstream_state(fs, angles)?;
    let r4 = mach_cone_downstream(&st).ray_radius(angles.wing_angle())?;
    let line = shock_line_ob(fs, &st)?;
    let r6 = (line.d / line.n1).abs();
    Ok(beta - (r4 / r6).min(1.0).asin())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Beta0Search {
    pub beta0: f64,
    pub roots: Vec<f64>,
    /// Values of `g` at the bracket ends `(beta_c+, pi/2 - 1e-3)`.
    pub g_start: f64,
    pub g_end: f64,
}

/// Smallest root of [`beta0_function`] on `(beta_c, pi/2 - 1e-3)`: a scan
/// with the given step for sign changes, each refined by bisection to 1e-10.
pub fn critical_beta_0(fs: &FreeStream, sigma: f64, step: f64) -> Result<Beta0Search> {
    if !(step > 0.0) {
        return Err(Error::invalid("step", "scan step must be positive"));
    }
    let bc = critical_beta_c(fs, sigma)?;
    let hi = FRAC_PI_2 - 1e-3;
    let g = |b: f64| beta0_function(fs, sigma, b);
    let mut trace = Vec::new();
    let mut roots = Vec::new();
    let mut b_prev = bc + 1e-9;
    let mut g_prev = g(b_prev)?;
    trace.push((b_prev, g_prev));
    let n = ((hi - bc) / step).ceil() as usize;
    for k in 1..=n {
        let b = (bc + k as f64 * step).min(hi);
        let gb = g(b)?;
        trace.push((b, gb));
        if gb == 0.0 {
            roots.push(b);
        } else if g_prev != 0.0 && (g_prev < 0.0) != (gb < 0.0) {
            let (mut lo, mut up, mut glo) = (b_prev, b, g_prev);
            while up - lo > 1e-10 {
                let mid = 0.5 * (lo + up);
                let gm = g(mid)?;
                if (gm < 0.0) == (glo < 0.0) {
                    lo = mid;
                    glo = gm;
                } else {
                    up = mid;
                }
            }
            roots.push(0.5 * (lo + up));
        }
        b_prev = b;
        g_prev = gb;
    }
    match roots.first() {
        Some(&beta0) => Ok(Beta0Search { beta0, g_start: trace[0].1, g_end: g_prev, roots }),
        None => Err(Error::NoBeta0 { trace }),
    }
}

/// Total classification: failures become regime labels with diagnostics.
pub fn classify_regime(fs: &FreeStream, angles: WingAngles) -> RegimeReport {
    let mut rep = RegimeReport {
        regime: Regime::BeyondScope,
        inputs: ReportInputs { q_inf: fs.q_inf, alpha: fs.alpha, sigma: angles.sigma, beta: angles.beta },
        alpha0: critical_alpha(fs),
        sigma0: None,
        beta_c: None,
        beta0: None,
        beta0_roots: Vec::new(),
        points: KeyPoints::default(),
        curves: RegimeCurves::default(),
        shocks: RegimeShocks::default(),
        states: RegimeStates::default(),
        diagnostics: Vec::new(),
    };
    if fs.alpha >= rep.alpha0 - ANGLE_TOL {
        rep.regime = Regime::Concentration;
        rep.diagnostics.push(format!("alpha = {} >= alpha0 = {}", fs.alpha, rep.alpha0));
        return rep;
    }
    let sigma0 = match critical_sigma(fs) {
        Ok(s) => s,
        Err(e) => {
            rep.regime = Regime::Concentration;
            rep.diagnostics.push(e.to_string());
            return rep;
        }
    };
    rep.sigma0 = Some(sigma0);
    if angles.sigma > sigma0 + ANGLE_TOL {
        rep.regime = Regime::ShockDetached;
        rep.diagnostics.push(format!("sigma = {} > sigma0 = {}", angles.sigma, sigma0));
        return rep;
    }
    match critical_beta_c(fs, angles.sigma) {
        Ok(bc) => rep.beta_c = Some(bc),
        Err(e) => rep.diagnostics.push(e.to_string()),
    }
    match critical_beta_0(fs, angles.sigma, 1e-3) {
        Ok(s) => {
            rep.beta0 = Some(s.beta0);
            if s.roots.len() > 1 {
                rep.diagnostics.push(format!("{} roots of the beta0 equation; the smallest is used", s.roots.len()));
            }
            rep.beta0_roots = s.roots;
        }
        Err(e) => rep.diagnostics.push(e.to_string()),
    }
    if let Err(e) = attached_pattern(fs, angles, &mut rep) {
        rep.regime = match e {
            Error::Concentration { .. } => Regime::Concentration,
            Error::SubsonicNormalFlow { .. } => Regime::ShockDetached,
            _ => Regime::BeyondScope,
        };
        rep.diagnostics.push(e.to_string());
    }
    rep
}

fn attached_pattern(fs: &FreeStream, angles: WingAngles, rep: &mut RegimeReport) -> Result<()> {
    let st = downstream_state(fs, angles)?;
    rep.states.downstream = Some(st);
    let cinf = mach_cone_inf(fs);
    let csig = mach_cone_downstream(&st);
    rep.curves.c_inf = Some(cinf);
    rep.curves.c_sigma = Some(csig);
    let s_ob = shock_line_ob(fs, &st)?;
    rep.shocks.s_ob = Some(s_ob);
    rep.points = key_points(fs, angles, &st)?;
    let t = tangency_point(&s_ob, &cinf)?;
    rep.points.p1 = Some(t.point);

    let beta = angles.beta;
    let bc = rep.beta_c.ok_or_else(|| Error::Construction("beta_c unavailable".into()))?;
    rep.regime = if beta == 0.0 {
        Regime::DeltaWing
    } else if beta < bc - ANGLE_TOL {
        Regime::Subcritical
    } else if beta <= bc + ANGLE_TOL {
        // The tangency point sits on the axis up to rounding.
        rep.points.p1 = rep.points.p2;
        Regime::PlanarShock
    } else {
        let refl = resulting_shock_state(fs, &st)?;
        rep.states.resulting = Some(refl.state);
        rep.shocks.s_r = Some(refl.shock);
        rep.curves.c_sigma_prime = Some(refl.cone);
        rep.points.p7 = Some([-refl.cone.ray_radius(PI)?, 0.0]);
        rep.points.pr = Some(tangency_point(&refl.shock, &csig)?.point);
        match rep.beta0 {
            Some(b0) if beta <= b0 + ANGLE_TOL => Regime::Reflected,
            Some(b0) => {
                rep.diagnostics.push(format!("beta = {beta} > beta0 = {b0}"));
                Regime::BeyondScope
            }
            None => Regime::BeyondScope,
        }
    };
    Ok(())
}
