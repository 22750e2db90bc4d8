//! Pointwise envelopes of the exact solution family over the admissible
//! sets of super- and sub-solutions.
//!
//! A direction `n = (sin z cos f, sin z sin f, cos z)` with `z` in
//! `(0, pi/2)` fixes `eta = tau n` up to scale. For a given direction the
//! boundary inequality pins the extremal `tau` in closed form, so only the
//! two angles are searched.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::exact_w;
use crate::error::{Error, Result};
use crate::mesh::{Grid, NodeTag};

/// Tolerance buffer of the bound check.
pub const BOUND_BUFFER: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Infimum over super-solutions.
    Upper,
    /// Supremum over sub-solutions.
    Lower,
}

/// Lifted sonic data `w = 1 + eps / sqrt(1 + |xi|^2)`, the value of
/// `phi / sqrt(1 + |xi|^2)` when `phi = sqrt(1 + |xi|^2) + eps`.
pub fn sonic_w(xi: [f64; 2], eps: f64) -> f64 {
    1.0 + eps / (1.0 + xi[0] * xi[0] + xi[1] * xi[1]).sqrt()
}

fn unit_lift(xi: [f64; 2]) -> [f64; 3] {
    let s = (1.0 + xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
    [xi[0] / s, xi[1] / s, 1.0 / s]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Polar-angle sector of the projective point `(eta1, eta2) / eta3`.
pub fn sector(side: Side, beta: f64) -> (f64, f64) {
    match side {
        Side::Upper => (1.5 * PI + beta, 2.0 * PI),
        Side::Lower => (FRAC_PI_2 + beta, PI),
    }
}

/// Boundary samples with their data values.
#[derive(Debug, Clone)]
struct Boundary {
    lifts: Vec<[f64; 3]>,
    data: Vec<f64>,
}

impl Boundary {
    fn new(grid: &Grid, eps: f64, arc_samples: usize) -> Result<Self> {
        let mut pts = grid.domain.sample_outer(arc_samples)?;
        pts.extend((0..grid.len()).filter(|&k| grid.tags[k] == NodeTag::Degenerate).map(|k| grid.nodes[k]));
        Ok(Self { lifts: pts.iter().map(|&p| unit_lift(p)).collect(), data: pts.iter().map(|&p| sonic_w(p, eps)).collect() })
    }

    /// Extremal admissible `tau` along unit direction `n`, or None.
    fn tau(&self, side: Side, n: &[f64; 3]) -> Option<f64> {
        match side {
            Side::Upper => {
                let mut t = 0.0f64;
                for (l, d) in self.lifts.iter().zip(&self.data) {
                    let c = dot(n, l);
                    if c <= 0.0 {
                        return None;
                    }
                    t = t.max(d / c);
                }
                Some(t * (1.0 + 1e-12))
            }
            Side::Lower => {
                let mut t = f64::INFINITY;
                for (l, d) in self.lifts.iter().zip(&self.data) {
                    let c = dot(n, l);
                    if c > 0.0 {
                        t = t.min(d / c);
                    }
                }
                t.is_finite().then_some(t * (1.0 - 1e-12))
            }
        }
    }

    fn admissible(&self, side: Side, eta: &[f64; 3]) -> bool {
        self.lifts.iter().zip(&self.data).all(|(l, d)| {
            let w = dot(eta, l);
            match side {
                Side::Upper => w > *d,
                Side::Lower => w < *d,
            }
        })
    }
}

/// Angles scaled to the unit square, kept strictly inside.
#[derive(Debug, Clone, Copy)]
struct Coords {
    u: f64,
    v: f64,
}

const EDGE: f64 = 1e-9;

impl Coords {
    fn clamp(self) -> Self {
        Self { u: self.u.clamp(EDGE, 1.0 - EDGE), v: self.v.clamp(EDGE, 1.0 - EDGE) }
    }

    fn direction(&self, lo: f64, hi: f64) -> [f64; 3] {
        let f = lo + self.u * (hi - lo);
        let z = self.v * FRAC_PI_2;
        [z.sin() * f.cos(), z.sin() * f.sin(), z.cos()]
    }
}

/// One envelope field and the coefficient vector attaining it per node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub side: Side,
    pub values: Vec<f64>,
    pub etas: Vec<[f64; 3]>,
    /// Number of admissible global samples.
    pub samples: usize,
}

/// Sampled envelope on the grid nodes.
///
/// `n_samples` global directions seed a per-node projected coordinate
/// descent of 50 sweeps. The boundary inequality is enforced on
/// `4 n_samples` arc points plus the Degenerate nodes.
pub fn envelope(grid: &Grid, eps: f64, side: Side, n_samples: usize) -> Result<Envelope> {
    if n_samples < 64 {
        return Err(Error::invalid("n_samples", "must be at least 64"));
    }
    let boundary = Boundary::new(grid, eps, 4 * n_samples)?;
    let (lo, hi) = sector(side, grid.domain.beta);
    let m = (n_samples as f64).sqrt().ceil() as usize;
    let seeds: Vec<(Coords, [f64; 3], f64)> = (0..m * m)
        .filter_map(|k| {
            let c = Coords { u: ((k % m) as f64 + 0.5) / m as f64, v: ((k / m) as f64 + 0.5) / m as f64 };
            let n = c.direction(lo, hi);
            boundary.tau(side, &n).map(|t| (c, n, t))
        })
        .collect();
    if seeds.is_empty() {
        return Err(Error::EmptyEnvelope(match side {
            Side::Upper => "no direction in the upper sector clears the sonic arc",
            Side::Lower => "no direction in the lower sector meets the sonic arc",
        }));
    }
    // Larger is better after this sign flip.
    let sign = match side {
        Side::Upper => -1.0,
        Side::Lower => 1.0,
    };
    let eval = |c: Coords, x: &[f64; 3]| -> Option<(f64, [f64; 3])> {
        let n = c.direction(lo, hi);
        let t = boundary.tau(side, &n)?;
        Some((sign * t * dot(&n, x), [t * n[0], t * n[1], t * n[2]]))
    };
    let out: Vec<(f64, [f64; 3])> = grid
        .nodes
        .par_iter()
        .map(|&p| {
            let x = unit_lift(p);
            let (mut best_c, n0, t0) = seeds
                .iter()
                .max_by(|a, b| (sign * a.2 * dot(&a.1, &x)).total_cmp(&(sign * b.2 * dot(&b.1, &x))))
                .copied()
                .expect("seeds nonempty");
            let mut best = (sign * t0 * dot(&n0, &x), [t0 * n0[0], t0 * n0[1], t0 * n0[2]]);
            let mut step = 0.5 / m as f64;
            for _ in 0..50 {
                let mut moved = false;
                for (du, dv) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                    let c = Coords { u: best_c.u + du, v: best_c.v + dv }.clamp();
                    if let Some(r) = eval(c, &x) {
                        if r.0 > best.0 && boundary.admissible(side, &r.1) {
                            best = r;
                            best_c = c;
                            moved = true;
                        }
                    }
                }
                if !moved {
                    step *= 0.5;
                }
            }
            (sign * best.0, best.1)
        })
        .collect();
    Ok(Envelope { side, values: out.iter().map(|r| r.0).collect(), etas: out.iter().map(|r| r.1).collect(), samples: seeds.len() })
}

/// Whether `eta` lies in the admissible set of `side`: projective point in
/// the open sector, `eta3 > 0`, and the strict inequality against the sonic
/// data on `arc_samples` arc points plus the Degenerate nodes.
pub fn is_admissible(grid: &Grid, eps: f64, side: Side, eta: [f64; 3], arc_samples: usize) -> Result<bool> {
    if !(eta[2] > 0.0) {
        return Ok(false);
    }
    let (lo, hi) = sector(side, grid.domain.beta);
    let f = eta[1].atan2(eta[0]).rem_euclid(2.0 * PI);
    if !(f > lo && f < hi) {
        return Ok(false);
    }
    Ok(Boundary::new(grid, eps, arc_samples)?.admissible(side, &eta))
}

/// Upper and lower envelopes on one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePair {
    pub eps: f64,
    pub w_plus: Envelope,
    pub w_minus: Envelope,
    /// `w_minus - sonic_w` per node: the lower envelope's lift above the
    /// lifted sonic value.
    pub delta_minus: Vec<f64>,
}

pub fn envelope_pair(grid: &Grid, eps: f64, n_samples: usize) -> Result<EnvelopePair> {
    let w_plus = envelope(grid, eps, Side::Upper, n_samples)?;
    let w_minus = envelope(grid, eps, Side::Lower, n_samples)?;
    let delta_minus = w_minus.values.iter().zip(&grid.nodes).map(|(w, &p)| w - sonic_w(p, eps)).collect();
    Ok(EnvelopePair { eps, w_plus, w_minus, delta_minus })
}

/// One out-of-band node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub node: usize,
    pub i: usize,
    pub j: usize,
    pub side: Side,
    /// Distance outside the buffered band.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub violations: Vec<Violation>,
    /// `min(w_plus + buffer - w)` over nodes.
    pub upper_margin: f64,
    /// `min(w - w_minus + buffer)` over nodes.
    pub lower_margin: f64,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Nodes where `w` leaves `[w_minus - 5e-3, w_plus + 5e-3]`.
pub fn bound_check(grid: &Grid, w: &[f64], env: &EnvelopePair) -> BoundReport {
    let mut violations = Vec::new();
    let (mut up, mut low) = (f64::INFINITY, f64::INFINITY);
    for (k, &wk) in w.iter().enumerate() {
        let (i, j) = grid.ij(k);
        let u = env.w_plus.values[k] + BOUND_BUFFER - wk;
        let l = wk - env.w_minus.values[k] + BOUND_BUFFER;
        up = up.min(u);
        low = low.min(l);
        if u < 0.0 {
            violations.push(Violation { node: k, i, j, side: Side::Upper, excess: -u });
        }
        if l < 0.0 {
            violations.push(Violation { node: k, i, j, side: Side::Lower, excess: -l });
        }
    }
    BoundReport { violations, upper_margin: up, lower_margin: low }
}

/// Evaluate `w^eta` on the grid nodes.
pub fn sample_field(grid: &Grid, eta: [f64; 3]) -> Vec<f64> {
    grid.nodes.iter().map(|&p| exact_w(eta, p)).collect()
}
