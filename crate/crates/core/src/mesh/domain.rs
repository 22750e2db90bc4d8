use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConicCurve, RayJet, Regime, RegimeReport};

/// Piece of the outer (sonic) boundary, parameterised by polar angle about O.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterArc {
    pub name: String,
    pub conic: ConicCurve,
    pub theta_lo: f64,
    pub theta_hi: f64,
}

/// Which arc to use at the kink angle, where the radius is only C^1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArcSide {
    /// Arc adjacent to the symmetry axis (larger polar angles).
    Sym,
    /// Arc adjacent to the wing.
    Wing,
}

/// The elliptic region: a curved triangle with corner O, bounded by the
/// symmetry segment, the wing ray and one or two Mach-cone arcs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub regime: Regime,
    pub beta: f64,
    /// Arcs ordered from the symmetry axis toward the wing. The first entry
    /// is absent when the kink sits on the axis (planar shock).
    pub arcs: Vec<OuterArc>,
    /// Corner points: symmetry-axis end, arc junction, wing end.
    pub p_sym: [f64; 2],
    pub p_kink: [f64; 2],
    pub p_wing: [f64; 2],
    pub kink_angle: Option<f64>,
}

impl DomainSpec {
    pub fn wing_angle(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 + self.beta
    }

    pub fn wing_normal(&self) -> [f64; 2] {
        [self.beta.cos(), self.beta.sin()]
    }

    pub fn sym_normal(&self) -> [f64; 2] {
        [0.0, -1.0]
    }

    fn arc_for(&self, theta: f64, side: Option<ArcSide>) -> &OuterArc {
        if self.arcs.len() == 1 {
            return &self.arcs[0];
        }
        let k = self.kink_angle.unwrap_or(PI);
        match side {
            Some(ArcSide::Sym) => &self.arcs[0],
            Some(ArcSide::Wing) => &self.arcs[1],
            None if theta >= k => &self.arcs[0],
            None => &self.arcs[1],
        }
    }

    /// Radius of the outer boundary along polar angle `theta`.
    pub fn radius(&self, theta: f64) -> Result<f64> {
        Ok(self.radius_jet(theta, None)?.r)
    }

    pub fn radius_jet(&self, theta: f64, side: Option<ArcSide>) -> Result<RayJet> {
        self.arc_for(theta, side).conic.ray_jet(theta)
    }

    /// Conic describing the boundary at angle `theta`.
    pub fn conic_at(&self, theta: f64) -> ConicCurve {
        self.arc_for(theta, None).conic
    }

    /// Outer boundary points sampled uniformly in polar angle.
    pub fn sample_outer(&self, n: usize) -> Result<Vec<[f64; 2]>> {
        let (lo, hi) = (self.wing_angle(), PI);
        (0..n)
            .map(|k| {
                let th = lo + (hi - lo) * k as f64 / (n - 1).max(1) as f64;
                let r = self.radius(th)?;
                Ok([r * th.cos(), r * th.sin()])
            })
            .collect()
    }

    /// Checks that every ray from O meets the outer boundary exactly once
    /// and that the arcs join with a common tangent.
    pub fn check_star_shaped(&self, samples: usize) -> Result<()> {
        let (lo, hi) = (self.wing_angle(), PI);
        for k in 0..samples {
            let th = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
            let r = self.radius(th).map_err(|_| Error::NotStarShaped { theta: th })?;
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::NotStarShaped { theta: th });
            }
            // The boundary must be an exit point: just inside it the
            // linear form exceeds the sonic radius.
            let c = self.conic_at(th);
            let (ct, st) = (th.cos(), th.sin());
            for f in [0.99, 0.999] {
                let p = [f * r * ct, f * r * st];
                if c.residual(p) <= 0.0 || c.linear(p) <= 0.0 {
                    return Err(Error::NotStarShaped { theta: th });
                }
            }
        }
        if let (Some(k), 2) = (self.kink_angle, self.arcs.len()) {
            let a = self.arcs[0].conic.ray_jet(k)?;
            let b = self.arcs[1].conic.ray_jet(k)?;
            let tol = 1e-8 * a.r.max(1.0);
            if (a.r - b.r).abs() > tol || (a.r_t - b.r_t).abs() > 1e-6 * a.r.max(1.0) {
                return Err(Error::Construction(format!(
                    "outer arcs do not join smoothly at angle {k}: r {} vs {}, r' {} vs {}",
                    a.r, b.r, a.r_t, b.r_t
                )));
            }
        }
        Ok(())
    }
}

fn angle_of(p: [f64; 2]) -> f64 {
    let a = p[1].atan2(p[0]);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Elliptic region of a report whose regime admits an interior problem.
pub fn build_domain(report: &RegimeReport) -> Result<DomainSpec> {
    if !report.regime.has_interior() {
        return Err(Error::NoInteriorProblem(report.regime.to_string()));
    }
    let missing = |what: &str| Error::Construction(format!("report lacks {what}"));
    let beta = report.inputs.beta;
    let csig = report.curves.c_sigma.ok_or_else(|| missing("C_sigma"))?;
    let wing = std::f64::consts::FRAC_PI_2 + beta;
    let (outer, name, p_sym, p_kink) = match report.regime {
        Regime::Reflected => (
            report.curves.c_sigma_prime.ok_or_else(|| missing("C_sigma_prime"))?,
            "C_sigma_prime",
            report.points.p7.ok_or_else(|| missing("P7"))?,
            report.points.pr.ok_or_else(|| missing("PR"))?,
        ),
        _ => (
            report.curves.c_inf.ok_or_else(|| missing("C_inf"))?,
            "C_inf",
            report.points.p2.ok_or_else(|| missing("P2"))?,
            report.points.p1.ok_or_else(|| missing("P1"))?,
        ),
    };
    let p_wing = report.points.p4.ok_or_else(|| missing("P4"))?;
    let planar = report.regime == Regime::PlanarShock;
    let k = if planar { PI } else { angle_of(p_kink) };
    if !(k > wing && k <= PI) {
        return Err(Error::Construction(format!("arc junction at angle {k} lies outside ({wing}, pi]")));
    }
    let mut arcs = Vec::new();
    if !planar {
        arcs.push(OuterArc { name: name.into(), conic: outer, theta_lo: k, theta_hi: PI });
    }
    arcs.push(OuterArc { name: "C_sigma".into(), conic: csig, theta_lo: wing, theta_hi: k });
    let spec = DomainSpec {
        regime: report.regime,
        beta,
        arcs,
        p_sym,
        p_kink: if planar { p_sym } else { p_kink },
        p_wing,
        kink_angle: (!planar).then_some(k),
    };
    spec.check_star_shaped(2049)?;
    Ok(spec)
}
