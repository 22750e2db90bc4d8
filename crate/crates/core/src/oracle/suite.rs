//! The full verification suite for one parameter set, as a list of named
//! pass/fail properties with the measured value and its threshold.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::envelope::{bound_check, envelope_pair};
use super::linear_reference::linear_reference;
use super::mms::mms_convergence;
use crate::error::Result;
use crate::gas::FreeStream;
use crate::geometry::{resulting_shock_state, shock_line_ob, Regime, RegimeReport};
use crate::mesh::{build_domain, generate_grid, NodeTag};
use crate::solver::{continuation_solve, newton_solve, reconstruct_fields, BoundaryData, Discretization, SolverConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    /// Viscosity of the regularized solve being checked.
    pub eps: f64,
    /// Global envelope samples per side.
    pub n_samples: usize,
    pub mms_sizes: Vec<usize>,
    pub jacobian_directions: usize,
    /// Seed for the random Jacobian directions.
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { eps: 0.05, n_samples: 256, mms_sizes: vec![17, 33, 65], jacobian_directions: 50, seed: 1 }
    }
}

/// Grid parameters of the solve being checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteGrid {
    pub ns: usize,
    pub nt: usize,
    pub stretch: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl PropertyResult {
    /// Passes when `value <= threshold`.
    fn at_most(name: &str, value: f64, threshold: f64, detail: String) -> Self {
        Self { name: name.into(), passed: value <= threshold, value, threshold, detail }
    }

    fn at_least(name: &str, value: f64, threshold: f64, detail: String) -> Self {
        Self { name: name.into(), passed: value >= threshold, value, threshold, detail }
    }

    fn failed(name: &str, err: impl std::fmt::Display) -> Self {
        Self { name: name.into(), passed: false, value: f64::NAN, threshold: f64::NAN, detail: err.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross_norm(a: [f64; 3], b: [f64; 3]) -> f64 {
    let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    dot(c, c).sqrt()
}

fn shock_defect(fs: &FreeStream, report: &RegimeReport) -> Result<f64> {
    let Some(st) = report.states.downstream else {
        return Ok(0.0);
    };
    let n = shock_line_ob(fs, &st)?.normal;
    let mut worst = (dot(fs.velocity(), n).abs() - fs.c_inf).abs();
    worst = worst.max((dot(st.velocity(), n).abs() - st.c).abs());
    worst = worst.max(cross_norm([st.v1 - fs.v1_inf, st.v2, st.v3 - fs.v3_inf], n));
    if report.regime == Regime::Reflected {
        let r = resulting_shock_state(fs, &st)?;
        let n = r.shock.normal;
        let vr = r.state.velocity();
        worst = worst.max((dot(st.velocity(), n).abs() - st.c).abs());
        worst = worst.max((dot(vr, n).abs() - r.state.cr).abs());
        worst = worst.max(cross_norm([vr[0] - st.v1, vr[1] - st.v2, vr[2] - st.v3], n));
    }
    Ok(worst)
}

/// Runs every property. Construction errors (no interior problem, bad
/// grid) are returned; numerical failures become failed properties.
pub fn run_suite(
    fs: &FreeStream,
    report: &RegimeReport,
    grid: SuiteGrid,
    solver: &SolverConfig,
    cfg: &SuiteConfig,
) -> Result<SuiteReport> {
    let mut out = Vec::new();
    out.push(PropertyResult::at_most(
        "characteristic_shocks",
        shock_defect(fs, report)?,
        1e-10,
        "max | |w.n| - c | and |[w] x n| over the constructed shocks".into(),
    ));

    let domain = build_domain(report)?;
    let g = generate_grid(&domain, grid.ns, grid.nt, grid.stretch)?;

    // w^eta > 1 on the closed domain needs eta3 > sqrt(1 + R^2).
    let r2 = g.nodes.iter().map(|x| x[0] * x[0] + x[1] * x[1]).fold(0.0, f64::max);
    let eta = [0.0, 0.0, 2f64.max(1.5 * (1.0 + r2).sqrt())];
    for mu in [0.0, 1.0] {
        let name = format!("mms_order_mu{mu}");
        out.push(match mms_convergence(&domain, eta, mu, &cfg.mms_sizes, grid.stretch) {
            Ok(t) => {
                let worst = t.orders.iter().map(|o| (o - 2.0).abs()).fold(0.0, f64::max);
                let errs: Vec<String> = t.rows.iter().map(|r| format!("{}: {:.3e}", r.n, r.error)).collect();
                PropertyResult::at_most(&name, worst, 0.5, format!("|order - 2|; errors {}; orders {:.3?}", errs.join(", "), t.orders))
            }
            Err(e) => PropertyResult::failed(&name, e),
        });
    }

    let eps = cfg.eps;
    let disc = Discretization::new(g, BoundaryData::Physical);
    match continuation_solve(&disc, eps, solver, None) {
        Ok(res) => {
            let stages = res.stages.len();
            match reconstruct_fields(&disc, &res.psi, 1.0, eps, &fs.gas, res.stages) {
                Ok(f) => {
                    let gr = &disc.grid;
                    let beta = gr.domain.beta;
                    let (mut l2, mut slip) = (0.0f64, 0.0f64);
                    for k in 0..gr.len() {
                        let v = f.velocity[k];
                        match gr.tags[k] {
                            NodeTag::Interior => l2 = l2.max(f.l2[k]),
                            NodeTag::Wing => slip = slip.max((v[0] * beta.cos() + v[1] * beta.sin()).abs()),
                            NodeTag::Sym => slip = slip.max(v[1].abs()),
                            _ => {}
                        }
                    }
                    let margin = f.diagnostics.ellipticity_margin;
                    out.push(PropertyResult::at_least(
                        "viscosity_margin",
                        margin,
                        eps - 1e-6,
                        format!("min(phi - sqrt(1+|xi|^2)) after {stages} continuation stages"),
                    ));
                    out.push(PropertyResult {
                        name: "interior_ellipticity".into(),
                        passed: l2 < 1.0,
                        value: l2,
                        threshold: 1.0,
                        detail: "max L2 over interior nodes (strict)".into(),
                    });
                    out.push(PropertyResult::at_most("neumann_slip", slip, 1e-6, "max slip residual on Wing/Sym nodes".into()));
                }
                Err(e) => out.push(PropertyResult::failed("field_reconstruction", e)),
            }
            let w: Vec<f64> = res.psi.iter().map(|p| p.cosh()).collect();
            out.push(match envelope_pair(&disc.grid, eps, cfg.n_samples) {
                Ok(env) => {
                    let rep = bound_check(&disc.grid, &w, &env);
                    PropertyResult::at_most(
                        "comparison_bounds",
                        rep.violations.len() as f64,
                        0.0,
                        format!("violations; margins upper {:.3e} lower {:.3e}", rep.upper_margin, rep.lower_margin),
                    )
                }
                Err(e) => PropertyResult::failed("comparison_bounds", e),
            });
        }
        Err(e) => out.push(PropertyResult::failed("regularized_solve", e)),
    }

    let mut psi = disc.initial_guess(eps);
    let cross = newton_solve(&disc, 0.0, eps, &mut psi, &solver.newton).and_then(|_| linear_reference(&disc, eps));
    out.push(match cross {
        Ok(direct) => {
            let diff = (0..disc.len()).map(|k| (disc.radial_weight[k] * psi[k].cosh() - direct[k]).abs()).fold(0.0, f64::max);
            PropertyResult::at_most("linear_cross_check", diff, 1e-8, "max |phi - phi_direct| at mu = 0".into())
        }
        Err(e) => PropertyResult::failed("linear_cross_check", e),
    });

    out.push(match jacobian_error(&disc, eps, cfg) {
        Ok(err) => PropertyResult::at_most(
            "jacobian",
            err,
            1e-6,
            format!("max relative error of J d against central differences, {} directions", cfg.jacobian_directions),
        ),
        Err(e) => PropertyResult::failed("jacobian", e),
    });

    Ok(SuiteReport { passed: out.iter().all(|p| p.passed), properties: out })
}

/// Max over random directions of `|J d - FD(d)|_inf / |J d|_inf`, with
/// `mu` spread over `[0, 1]`.
fn jacobian_error(disc: &Discretization, eps: f64, cfg: &SuiteConfig) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut next = move || rng.random::<f64>();
    let psi: Vec<f64> = disc.initial_guess(eps).iter().map(|p| p + 0.05 * next()).collect();
    let n = cfg.jacobian_directions.max(1);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let mu = if n == 1 { 1.0 } else { k as f64 / (n - 1) as f64 };
        let lin = disc.linearize(&psi, mu, eps)?;
        let d: Vec<f64> = (0..disc.len()).map(|_| next() - 0.5).collect();
        let jd = lin.jacobian.matvec(&d);
        let shift = |t: f64| psi.iter().zip(&d).map(|(p, d)| p + t * d).collect::<Vec<f64>>();
        let rp = disc.residual(&shift(h), mu, eps)?;
        let rm = disc.residual(&shift(-h), mu, eps)?;
        let (mut num, mut den) = (0.0f64, 0.0f64);
        for i in 0..disc.len() {
            num = num.max((jd[i] - (rp[i] - rm[i]) / (2.0 * h)).abs());
            den = den.max(jd[i].abs());
        }
        worst = worst.max(num / den);
    }
    Ok(worst)
}
