use std::f64::consts::PI;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use super::domain::{ArcSide, DomainSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeTag {
    Interior,
    Sym,
    Wing,
    Degenerate,
    CornerO,
}

impl NodeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeTag::Interior => "Interior",
            NodeTag::Sym => "Sym",
            NodeTag::Wing => "Wing",
            NodeTag::Degenerate => "Degenerate",
            NodeTag::CornerO => "CornerO",
        }
    }
}

/// Cell count at which `stretch` is the exact ratio of consecutive widths.
pub const REFERENCE_CELLS: f64 = 64.0;

/// Radial coordinate `T(eta) = (1 - e^(L eta)) / (1 - e^L)`, refined toward
/// the outer arc with `L = -64 ln(stretch)`.
///
/// The map does not depend on the node count, so on 65 radial nodes
/// consecutive cell widths shrink by exactly `1/stretch`, and finer or
/// coarser grids sample the same map (which is what keeps refinement
/// studies consistent).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialMap {
    pub stretch: f64,
}

impl RadialMap {
    /// `(T, T', T'')` at `eta`.
    pub fn eval(&self, eta: f64) -> (f64, f64, f64) {
        if self.stretch == 1.0 {
            return (eta, 1.0, 0.0);
        }
        let l = -(self.stretch.ln()) * REFERENCE_CELLS;
        let den = -(l.exp_m1());
        let e = (l * eta).exp();
        (-(l * eta).exp_m1() / den, -l * e / den, -l * l * e / den)
    }
}

/// Polar angle `theta(s) = pi - span (s + kappa sin(pi s))`, `span = pi/2 - beta`.
///
/// `kappa` shifts nodes so that the arc junction falls on a grid line
/// while keeping `theta` odd about both ends (so the outer radius stays even
/// across the straight sides).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularMap {
    pub span: f64,
    pub kappa: f64,
}

impl AngularMap {
    pub fn eval(&self, s: f64) -> (f64, f64, f64) {
        let (sn, cs) = (PI * s).sin_cos();
        (
            PI - self.span * (s + self.kappa * sn),
            -self.span * (1.0 + self.kappa * PI * cs),
            self.span * self.kappa * PI * PI * sn,
        )
    }
}

/// Position and map derivatives at a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeMetric {
    pub x: Vector2<f64>,
    pub xs: Vector2<f64>,
    pub xe: Vector2<f64>,
    pub xss: Vector2<f64>,
    pub xse: Vector2<f64>,
    pub xee: Vector2<f64>,
}

#[derive(Debug, Clone)]
pub struct Grid {
    pub domain: DomainSpec,
    pub ns: usize,
    pub nt: usize,
    pub radial: RadialMap,
    pub angular: AngularMap,
    /// Node index along `s` carrying the arc junction, and the arc whose
    /// metric (and one-sided differences) it uses.
    pub kink: Option<(usize, ArcSide)>,
    pub s: Vec<f64>,
    pub eta: Vec<f64>,
    pub t: Vec<f64>,
    pub nodes: Vec<[f64; 2]>,
    pub tags: Vec<NodeTag>,
    pub metric: Vec<NodeMetric>,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.ns * self.nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Storage index of node `(i, j)`. Every `j = 0` node is the corner O,
    /// stored at index 0; the other `j = 0` slots are placeholders.
    pub fn idx(&self, i: usize, j: usize) -> usize {
        if j == 0 {
            0
        } else {
            i + j * self.ns
        }
    }

    pub fn ij(&self, k: usize) -> (usize, usize) {
        (k % self.ns, k / self.ns)
    }

    pub fn xi(&self, k: usize) -> [f64; 2] {
        self.nodes[k]
    }

    pub fn h_s(&self) -> f64 {
        1.0 / (self.ns - 1) as f64
    }

    pub fn h_eta(&self) -> f64 {
        1.0 / (self.nt - 1) as f64
    }

    /// True for storage slots that are copies of the corner O.
    pub fn is_placeholder(&self, k: usize) -> bool {
        k > 0 && k < self.ns
    }
}

/// Polar fan grid of `ns x nt` nodes over the domain.
pub fn generate_grid(domain: &DomainSpec, ns: usize, nt: usize, stretch: f64) -> Result<Grid> {
    if ns < 9 || nt < 9 {
        return Err(Error::invalid("grid", format!("need Ns, Nt >= 9, got {ns} x {nt}")));
    }
    if !(stretch >= 1.0 && stretch.is_finite()) {
        return Err(Error::invalid("stretch", format!("must be >= 1, got {stretch}")));
    }
    let span = PI / 2.0 - domain.beta;
    let hs = 1.0 / (ns - 1) as f64;
    let mut angular = AngularMap { span, kappa: 0.0 };
    let mut kink = None;
    if let Some(k) = domain.kink_angle {
        let tau = (PI - k) / span;
        let kk = ((tau / hs).round() as usize).clamp(1, ns - 2);
        let sk = kk as f64 * hs;
        let kappa = (tau - sk) / (PI * sk).sin();
        if (kappa * PI).abs() <= 0.5 {
            angular.kappa = kappa;
            let side = if kk >= 3 { ArcSide::Sym } else { ArcSide::Wing };
            kink = Some((kk, side));
        }
    }
    let radial = RadialMap { stretch };
    let s: Vec<f64> = (0..ns).map(|i| i as f64 * hs).collect();
    let eta: Vec<f64> = (0..nt).map(|j| j as f64 / (nt - 1) as f64).collect();
    let t: Vec<f64> = eta.iter().map(|&e| radial.eval(e).0).collect();

    // Outer boundary point P(s) = R e(theta) and its s-derivatives.
    let mut p = Vec::with_capacity(ns);
    for (i, &si) in s.iter().enumerate() {
        let (th, th1, th2) = angular.eval(si);
        let side = kink.and_then(|(kk, sd)| (kk == i).then_some(sd));
        let jet = domain.radius_jet(th, side)?;
        let (r, rs, rss) = (jet.r, jet.r_t * th1, jet.r_tt * th1 * th1 + jet.r_t * th2);
        let e = Vector2::new(th.cos(), th.sin());
        let ep = Vector2::new(-th.sin(), th.cos());
        p.push((
            e * r,
            e * rs + ep * (r * th1),
            e * (rss - r * th1 * th1) + ep * (2.0 * rs * th1 + r * th2),
        ));
    }

    let n = ns * nt;
    let mut nodes = vec![[0.0; 2]; n];
    let mut tags = vec![NodeTag::CornerO; n];
    let zero = Vector2::zeros();
    let mut metric = vec![NodeMetric { x: zero, xs: zero, xe: zero, xss: zero, xse: zero, xee: zero }; n];
    for j in 0..nt {
        let (tj, t1, t2) = radial.eval(eta[j]);
        for i in 0..ns {
            let k = i + j * ns;
            let (pp, ps, pss) = p[i];
            let x = pp * tj;
            nodes[k] = [x[0], x[1]];
            metric[k] = NodeMetric { x, xs: ps * tj, xe: pp * t1, xss: pss * tj, xse: ps * t1, xee: pp * t2 };
            tags[k] = if j == nt - 1 {
                NodeTag::Degenerate
            } else if j == 0 {
                NodeTag::CornerO
            } else if i == 0 {
                NodeTag::Sym
            } else if i == ns - 1 {
                NodeTag::Wing
            } else {
                NodeTag::Interior
            };
            if j > 0 {
                let m = &metric[k];
                let det = m.xs[0] * m.xe[1] - m.xs[1] * m.xe[0];
                if !(det > 0.0) {
                    return Err(Error::NonPositiveJacobian { i, j });
                }
            }
        }
    }
    // Outer nodes exactly at the parameter t = 1 are on the arcs.
    for i in 0..ns {
        let k = i + (nt - 1) * ns;
        let th = angular.eval(s[i]).0;
        let side = kink.and_then(|(kk, sd)| (kk == i).then_some(sd));
        let conic = match side {
            Some(ArcSide::Sym) => domain.arcs[0].conic,
            Some(ArcSide::Wing) => domain.arcs[domain.arcs.len() - 1].conic,
            None => domain.conic_at(th),
        };
        let res = conic.relative_residual(nodes[k]);
        if res.abs() > 1e-12 {
            return Err(Error::Construction(format!("outer node {i} is off its arc (residual {res:e})")));
        }
    }
    Ok(Grid { domain: domain.clone(), ns, nt, radial, angular, kink, s, eta, t, nodes, tags, metric })
}
