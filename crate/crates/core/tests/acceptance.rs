//! End-to-end acceptance suite. Prints one line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use caretflow::geometry::*;
use caretflow::mesh::{build_domain, generate_grid, DomainSpec, NodeTag};
use caretflow::oracle::{bound_check, envelope_pair, linear_reference, mms_convergence};
use caretflow::polar::polar_state;
use caretflow::solver::*;
use caretflow::{FreeStream, GasConstants, Regime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl Into<String>) -> Outcome {
    let msg = msg.into();
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn fs() -> FreeStream {
    FreeStream::new(2.0, FRAC_PI_6, GasConstants::default()).unwrap()
}

fn reference_domain() -> DomainSpec {
    build_domain(&classify_regime(&fs(), WingAngles { sigma: 0.5, beta: 0.1 })).unwrap()
}

fn reference_disc() -> Discretization {
    Discretization::new(generate_grid(&reference_domain(), 65, 65, 1.05).unwrap(), BoundaryData::Physical)
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross_norm(a: [f64; 3], b: [f64; 3]) -> f64 {
    let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    dot(c, c).sqrt()
}

fn polar_invariants() -> Outcome {
    let (u0, c0) = (2.0, 3f64.sqrt());
    let gamma = (c0 / u0).asin();
    let mut worst: f64 = 0.0;
    for k in 1..=200 {
        let th = gamma * k as f64 / 201.0;
        let p = polar_state(u0, c0, th).map_err(|e| e.to_string())?;
        worst = worst.max((p.u1 * p.u1 + p.v1 * p.v1 - p.c1 * p.c1 - 1.0).abs());
        worst = worst.max((p.u1 * gamma.sin() - p.v1 * gamma.cos() - p.c1).abs());
    }
    let p = polar_state(u0, c0, FRAC_PI_6).map_err(|e| e.to_string())?;
    let r3 = 1.0 / 3f64.sqrt();
    let spot = (p.u1 - 1.0).abs().max((p.v1 - r3).abs()).max((p.c1 - r3).abs());
    check(worst < 1e-12 && spot < 1e-12, format!("max invariant defect {worst:.2e}, spot error {spot:.2e}"))
}

fn critical_angles() -> Outcome {
    let f = fs();
    let a0 = critical_alpha(&f);
    let s0 = critical_sigma(&f).map_err(|e| e.to_string())?;
    let bc = critical_beta_c(&f, 0.5).map_err(|e| e.to_string())?;
    let rep = classify_regime(&f, WingAngles { sigma: 0.5, beta: 0.1 });
    let p2 = rep.points.p2.ok_or("no P2")?;
    let errs = [
        (a0 - FRAC_PI_3).abs(),
        (s0 - (1.0 / 3f64.sqrt()).asin()).abs(),
        (p2[0] + 1.0 / 3f64.sqrt()).abs(),
        (bc - (0.5f64.tan() / 3f64.sqrt()).asin()).abs(),
    ];
    // sqrt(3) is rounded before the arcsine, so "exact" means within one ulp.
    let ulp = f64::EPSILON * FRAC_PI_3;
    check(errs[0] <= ulp && errs[1..].iter().all(|e| *e < 1e-12), format!("errors {:.2e} {:.2e} {:.2e} {:.2e}", errs[0], errs[1], errs[2], errs[3]))
}

fn beta_c_consistency() -> Outcome {
    let f = fs();
    let bc = critical_beta_c(&f, 0.5).map_err(|e| e.to_string())?;
    let st = downstream_state(&f, WingAngles { sigma: 0.5, beta: bc }).map_err(|e| e.to_string())?;
    let line = shock_line_ob(&f, &st).map_err(|e| e.to_string())?;
    let t = tangency_point(&line, &mach_cone_inf(&f)).map_err(|e| e.to_string())?;
    let v = st.v1.abs() + st.v2.abs();
    let at_p2 = (t.point[0] + 1.0 / 3f64.sqrt()).abs() + t.point[1].abs();
    check(
        v < 1e-9 && t.residual.abs() < 1e-9 && at_p2 < 1e-6,
        format!("|v1|+|v2| = {v:.2e}, tangency residual {:.2e}, distance to P2 {at_p2:.2e}", t.residual.abs()),
    )
}

fn characteristic_shocks() -> Outcome {
    let f = fs();
    let b0 = critical_beta_0(&f, 0.5, 1e-3).map_err(|e| e.to_string())?.beta0;
    let bc = critical_beta_c(&f, 0.5).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut regimes = Vec::new();
    let mut betas: Vec<f64> = (0..60).map(|k| 0.999 * b0 * k as f64 / 59.0).collect();
    betas.push(bc);
    for beta in betas {
        let angles = WingAngles { sigma: 0.5, beta };
        let regime = classify_regime(&f, angles).regime;
        if !regimes.contains(&regime) {
            regimes.push(regime);
        }
        let st = downstream_state(&f, angles).map_err(|e| e.to_string())?;
        let n = shock_line_ob(&f, &st).map_err(|e| e.to_string())?.normal;
        worst = worst.max((dot(f.velocity(), n).abs() - f.c_inf).abs());
        worst = worst.max((dot(st.velocity(), n).abs() - st.c).abs());
        worst = worst.max(cross_norm([st.v1 - f.v1_inf, st.v2, st.v3 - f.v3_inf], n));
        if regime == Regime::Reflected {
            let r = resulting_shock_state(&f, &st).map_err(|e| e.to_string())?;
            let n = r.shock.normal;
            let vr = r.state.velocity();
            worst = worst.max((dot(st.velocity(), n).abs() - st.c).abs());
            worst = worst.max((dot(vr, n).abs() - r.state.cr).abs());
            worst = worst.max(cross_norm([vr[0] - st.v1, vr[1] - st.v2, vr[2] - st.v3], n));
        }
    }
    let covered = [Regime::Subcritical, Regime::PlanarShock, Regime::Reflected].iter().all(|r| regimes.contains(r));
    check(worst < 1e-10 && covered, format!("max defect {worst:.2e} over regimes {regimes:?}"))
}

fn beta0_root() -> Outcome {
    let f = fs();
    let s = critical_beta_0(&f, 0.5, 1e-3).map_err(|e| e.to_string())?;
    let bc = critical_beta_c(&f, 0.5).map_err(|e| e.to_string())?;
    // Dense scan with a secant step inside the first sign change.
    let g = |b: f64| beta0_function(&f, 0.5, b).unwrap();
    let h = 1e-5;
    let mut b = bc + 1e-9;
    let mut gb = g(b);
    let mut scanned = None;
    while b < FRAC_PI_2 - 1e-3 {
        let b2 = b + h;
        let g2 = g(b2);
        if gb < 0.0 && g2 >= 0.0 {
            scanned = Some(b - gb * h / (g2 - gb));
            break;
        }
        b = b2;
        gb = g2;
    }
    let scanned = scanned.ok_or("dense scan found no sign change")?;
    let diff = (s.beta0 - scanned).abs();
    check(
        diff < 1e-8 && s.g_start < 0.0 && s.g_end > 0.0,
        format!("beta0 = {:.10}, scan differs by {diff:.2e}, g(ends) = ({:.3e}, {:.3e})", s.beta0, s.g_start, s.g_end),
    )
}

fn mms() -> Outcome {
    let dom = reference_domain();
    let mut lines = Vec::new();
    let mut ok = true;
    for mu in [0.0, 1.0] {
        let t = mms_convergence(&dom, [0.0, 0.0, 2.0], mu, &[17, 33, 65], 1.05).map_err(|e| e.to_string())?;
        ok &= t.orders.iter().all(|o| (1.5..=2.5).contains(o));
        let errs: Vec<String> = t.rows.iter().map(|r| format!("{:.2e}", r.error)).collect();
        lines.push(format!("mu={mu}: errors [{}] orders {:.2?}", errs.join(", "), t.orders));
    }
    check(ok, lines.join("; "))
}

fn full_solve() -> Outcome {
    let eps = 0.05;
    let disc = reference_disc();
    let res = continuation_solve(&disc, eps, &SolverConfig::default(), None).map_err(|e| e.to_string())?;
    let f = reconstruct_fields(&disc, &res.psi, 1.0, eps, &fs().gas, res.stages.clone()).map_err(|e| e.to_string())?;
    let g = &disc.grid;
    let beta = g.domain.beta;
    let (mut margin, mut l2, mut slip) = (f64::INFINITY, 0.0f64, 0.0f64);
    for k in 0..g.len() {
        let x = g.nodes[k];
        margin = margin.min(f.phi[k] - (1.0 + x[0] * x[0] + x[1] * x[1]).sqrt());
        let v = f.velocity[k];
        match g.tags[k] {
            NodeTag::Interior => l2 = l2.max(f.l2[k]),
            NodeTag::Wing => slip = slip.max((v[0] * beta.cos() + v[1] * beta.sin()).abs()),
            NodeTag::Sym => slip = slip.max(v[1].abs()),
            _ => {}
        }
    }
    check(
        margin >= eps - 1e-6 && l2 < 1.0 && slip < 1e-6,
        format!("{} stages, margin {margin:.6}, max interior L2 {l2:.4}, slip {slip:.2e}", res.stages.len()),
    )
}

fn comparison_bounds() -> Outcome {
    let eps = 0.05;
    let disc = reference_disc();
    let res = continuation_solve(&disc, eps, &SolverConfig::default(), None).map_err(|e| e.to_string())?;
    let w: Vec<f64> = res.psi.iter().map(|p| p.cosh()).collect();
    let env = envelope_pair(&disc.grid, eps, 256).map_err(|e| e.to_string())?;
    let rep = bound_check(&disc.grid, &w, &env);
    check(
        rep.passed() && env.w_plus.samples >= 1 && env.w_minus.samples >= 1,
        format!(
            "{} violations, margins upper {:.3e} lower {:.3e}, admissible seeds {}/{}",
            rep.violations.len(),
            rep.upper_margin,
            rep.lower_margin,
            env.w_plus.samples,
            env.w_minus.samples
        ),
    )
}

fn eps_sweep() -> Outcome {
    let disc = reference_disc();
    let cfg = SolverConfig::default();
    let sw = epsilon_sweep(&disc, &cfg, &fs().gas);
    if let Some((eps, e)) = &sw.failure {
        return Err(format!("sweep stopped at eps = {eps}: {e}"));
    }
    let g = &disc.grid;
    let s: Vec<f64> = g.nodes.iter().map(|x| (1.0 + x[0] * x[0] + x[1] * x[1]).sqrt()).collect();
    let mut dirichlet: f64 = 0.0;
    for f in &sw.fields {
        for k in (0..g.len()).filter(|&k| g.tags[k] == NodeTag::Degenerate) {
            dirichlet = dirichlet.max((f.phi[k] - s[k] - f.eps).abs());
        }
    }
    let mut rise = f64::NEG_INFINITY;
    for w in sw.fields.windows(2) {
        for k in 0..g.len() {
            rise = rise.max(w[1].phi[k] - w[0].phi[k]);
        }
    }
    let ex = sw.extrapolated_phi.ok_or("no extrapolation")?;
    let low = (0..g.len()).map(|k| ex[k] - s[k]).fold(f64::INFINITY, f64::min);
    check(
        sw.fields.len() == 5 && dirichlet < 1e-12 && rise <= 5e-3 && low >= -1e-6,
        format!("boundary defect {dirichlet:.2e}, max rise {rise:.2e}, min extrapolated lift {low:.3e}"),
    )
}

fn linear_cross_check() -> Outcome {
    let eps = 0.05;
    let disc = reference_disc();
    let mut psi = disc.initial_guess(eps);
    newton_solve(&disc, 0.0, eps, &mut psi, &SolverConfig::default().newton).map_err(|e| e.to_string())?;
    let direct = linear_reference(&disc, eps).map_err(|e| e.to_string())?;
    let diff = (0..disc.len())
        .map(|k| (disc.radial_weight[k] * psi[k].cosh() - direct[k]).abs())
        .fold(0.0, f64::max);
    check(diff < 1e-8, format!("max |phi - phi_direct| = {diff:.2e}"))
}

fn jacobian() -> Outcome {
    let eps = 0.05;
    let disc = reference_disc();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let psi: Vec<f64> = disc.initial_guess(eps).iter().map(|p| p + 0.05 * rng.random::<f64>()).collect();
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let mu = k as f64 / 49.0;
        let lin = disc.linearize(&psi, mu, eps).map_err(|e| e.to_string())?;
        let d: Vec<f64> = (0..disc.len()).map(|_| rng.random::<f64>() - 0.5).collect();
        let jd = lin.jacobian.matvec(&d);
        let shift = |t: f64| psi.iter().zip(&d).map(|(p, d)| p + t * d).collect::<Vec<f64>>();
        let rp = disc.residual(&shift(h), mu, eps).map_err(|e| e.to_string())?;
        let rm = disc.residual(&shift(-h), mu, eps).map_err(|e| e.to_string())?;
        let (mut num, mut den) = (0.0f64, 0.0f64);
        for i in 0..disc.len() {
            num = num.max((jd[i] - (rp[i] - rm[i]) / (2.0 * h)).abs());
            den = den.max(jd[i].abs());
        }
        worst = worst.max(num / den);
    }
    check(worst < 1e-6, format!("max relative error {worst:.2e} over 50 directions"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 11] = [
        ("shock polar invariants", polar_invariants, Duration::from_secs(1)),
        ("critical angles", critical_angles, Duration::from_secs(1)),
        ("beta_c consistency", beta_c_consistency, Duration::from_secs(1)),
        ("characteristic shocks", characteristic_shocks, Duration::from_secs(1)),
        ("beta0 root-find", beta0_root, Duration::from_secs(10)),
        ("manufactured convergence", mms, Duration::from_secs(60)),
        ("regularized solve", full_solve, Duration::from_secs(60)),
        ("comparison bounds", comparison_bounds, Duration::from_secs(60)),
        ("eps sweep", eps_sweep, Duration::from_secs(300)),
        ("mu=0 cross-check", linear_cross_check, Duration::from_secs(30)),
        ("Jacobian check", jacobian, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (n, (name, run, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t.elapsed();
        let (pass, msg) = match out {
            Ok(m) if dt <= *budget => (true, m),
            Ok(m) => (false, format!("{m}; over time budget {budget:?}")),
            Err(m) => (false, m),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {}: {} [{name}] {msg} ({:.2} s)",
            n + 1,
            if pass { "PASS" } else { "FAIL" },
            dt.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
