use std::f64::consts::FRAC_PI_6;

use caretflow::geometry::{classify_regime, WingAngles};
use caretflow::mesh::{build_domain, generate_grid, Grid, NodeTag};
use caretflow::oracle::exact_w;
use caretflow::solver::*;
use caretflow::{Error, FreeStream, GasConstants};
use nalgebra::{Matrix2, Vector2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fs() -> FreeStream {
    FreeStream::new(2.0, FRAC_PI_6, GasConstants::default()).unwrap()
}

fn grid(beta: f64, n: usize) -> Grid {
    let rep = classify_regime(&fs(), WingAngles { sigma: 0.5, beta });
    generate_grid(&build_domain(&rep).unwrap(), n, n, 1.05).unwrap()
}

fn physical(beta: f64, n: usize) -> Discretization {
    Discretization::new(grid(beta, n), BoundaryData::Physical)
}

fn inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

#[test]
fn flat_psi_leaves_positive_zero_order_term() {
    let eps = 0.05;
    let disc = physical(0.1, 17);
    let psi0 = (1.0f64 + eps).acosh();
    let psi = vec![psi0; disc.len()];
    let r = disc.residual(&psi, 0.0, eps).unwrap();
    for k in 0..disc.len() {
        if disc.kinds[k] == RowKind::Pde {
            let x = disc.grid.nodes[k];
            let ww = 1.0 + x[0] * x[0] + x[1] * x[1];
            let want = disc.row_scale[k] * 2.0 / (ww * psi0.tanh());
            assert!(r[k] > 0.0);
            assert!((r[k] - want).abs() < 1e-9 * want, "{} vs {want}", r[k]);
        }
    }
}

#[test]
fn residual_is_affine_in_mu() {
    let eps = 0.05;
    let disc = physical(0.1, 17);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let psi: Vec<f64> = disc.initial_guess(eps).iter().map(|p| p + 0.02 * rng.random::<f64>()).collect();
    let r0 = disc.residual(&psi, 0.0, eps).unwrap();
    let r1 = disc.residual(&psi, 1.0, eps).unwrap();
    let rh = disc.residual(&psi, 0.3, eps).unwrap();
    for k in 0..disc.len() {
        let want = 0.7 * r0[k] + 0.3 * r1[k];
        assert!((rh[k] - want).abs() < 1e-12 * (1.0 + r0[k].abs() + r1[k].abs()));
    }
}

#[test]
fn pointwise_mu_difference_is_rank_one_term_and_partners() {
    let xi = Vector2::new(-0.3, 0.4);
    let g = Vector2::new(0.2, -0.5);
    let h = Matrix2::new(0.7, -0.1, -0.1, 0.3);
    let psi: f64 = 0.4;
    let f0 = pde_point(xi, psi, g, h, 0.0).f;
    let f1 = pde_point(xi, psi, g, h, 1.0).f;
    let ww = 1.0 + xi.norm_squared();
    let gx = g.dot(&xi);
    let m = ww * (g.norm_squared() + gx * gx);
    let b = g + xi * gx;
    let want = -ww * b.dot(&(h * b)) - 2.0 * m * gx - (1.0 + m) * m / (ww * psi.tanh());
    assert!((f1 - f0 - want).abs() < 1e-14);
}

#[test]
fn second_order_coefficients_at_zero_gradient() {
    let xi = Vector2::new(-0.3, 0.4);
    for mu in [0.0, 0.5, 1.0] {
        let p = pde_point(xi, 0.3, Vector2::zeros(), Matrix2::zeros(), mu);
        let a = Matrix2::identity() + xi * xi.transpose();
        assert!((p.f_h - a).abs().max() < 1e-15);
        assert!(p.f_h.symmetric_eigenvalues().min() > 0.0);
    }
}

#[test]
fn dirichlet_rows_are_identity_rows() {
    let eps = 0.05;
    let disc = physical(0.1, 17);
    let lin = disc.linearize(&disc.initial_guess(eps), 0.5, eps).unwrap();
    for k in (0..disc.len()).filter(|&k| disc.kinds[k] == RowKind::Dirichlet) {
        let row: Vec<_> = lin.jacobian.triplets.iter().filter(|t| t.row == k).collect();
        assert_eq!(row.len(), 1);
        assert_eq!((row[0].col, row[0].val), (k, 1.0));
        assert_eq!(disc.grid.tags[k], NodeTag::Degenerate);
    }
}

#[test]
fn jacobian_matches_central_differences() {
    let eps = 0.05;
    for (beta, mu) in [(0.1, 0.7), (0.45, 1.0)] {
        let disc = physical(beta, 17);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let psi: Vec<f64> = disc.initial_guess(eps).iter().map(|p| p + 0.05 * rng.random::<f64>()).collect();
        let lin = disc.linearize(&psi, mu, eps).unwrap();
        let h = 1e-6;
        for _ in 0..25 {
            let d: Vec<f64> = (0..disc.len()).map(|_| rng.random::<f64>() - 0.5).collect();
            let jd = lin.jacobian.matvec(&d);
            let plus: Vec<f64> = psi.iter().zip(&d).map(|(p, d)| p + h * d).collect();
            let minus: Vec<f64> = psi.iter().zip(&d).map(|(p, d)| p - h * d).collect();
            let rp = disc.residual(&plus, mu, eps).unwrap();
            let rm = disc.residual(&minus, mu, eps).unwrap();
            let fd: Vec<f64> = rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
            let diff: Vec<f64> = jd.iter().zip(&fd).map(|(a, b)| a - b).collect();
            assert!(inf(&diff) < 1e-6 * inf(&jd), "beta {beta}: {:e}", inf(&diff) / inf(&jd));
        }
    }
}

#[test]
fn manufactured_newton_converges_from_flat_guess() {
    let eta = [0.0, 0.0, 2.0];
    let disc = Discretization::new(grid(0.1, 33), BoundaryData::Manufactured { eta });
    let mut psi = disc.initial_guess(0.0);
    let rep = newton_solve(&disc, 1.0, 0.0, &mut psi, &NewtonConfig::default()).unwrap();
    assert!(rep.residual < 1e-10);
    let err = psi
        .iter()
        .zip(&disc.grid.nodes)
        .map(|(p, &x)| (p.cosh() - exact_w(eta, x)).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-3, "{err}");
}

#[test]
fn truncation_error_of_exact_solution_is_second_order() {
    // Off the first polar rings, where the Hessian is only first order.
    let eta = [0.0, 0.0, 2.0];
    let err = |n: usize| {
        let disc = Discretization::new(grid(0.1, n), BoundaryData::Manufactured { eta });
        let psi: Vec<f64> = disc.grid.nodes.iter().map(|&x| exact_w(eta, x).acosh()).collect();
        let r = disc.residual(&psi, 1.0, 0.0).unwrap();
        (0..disc.len())
            .filter(|&k| disc.kinds[k] == RowKind::Pde && disc.grid.eta[disc.grid.ij(k).1] >= 0.125)
            .map(|k| (r[k] / disc.row_scale[k]).abs())
            .fold(0.0, f64::max)
    };
    let e: Vec<f64> = [17, 33, 65].iter().map(|&n| err(n)).collect();
    for w in e.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.5..=4.5).contains(&ratio), "{e:?}");
    }
}

#[test]
fn continuation_reference_solve() {
    let eps = 0.05;
    let disc = physical(0.1, 65);
    let cfg = SolverConfig::default();
    let res = continuation_solve(&disc, eps, &cfg, None).unwrap();
    assert!(res.stages.len() <= 20);
    assert_eq!(res.stages.last().unwrap().mu, 1.0);
    for w in res.stages.windows(2) {
        assert!(w[1].mu > w[0].mu);
    }
    for s in &res.stages {
        assert!(s.margin >= eps - 1e-6);
        assert!(s.residual < 1e-10);
    }
    let f = reconstruct_fields(&disc, &res.psi, 1.0, eps, &fs().gas, res.stages.clone()).unwrap();
    let g = &disc.grid;
    let beta = g.domain.beta;
    let mut slip: f64 = 0.0;
    let (mut inner, mut outer) = (0.0f64, 0.0f64);
    for k in 0..g.len() {
        let x = g.nodes[k];
        let s = (1.0 + x[0] * x[0] + x[1] * x[1]).sqrt();
        let v = f.velocity[k];
        let q2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        assert!((q2 - f.c[k] * f.c[k] - 1.0).abs() < 1e-12 * q2);
        assert!((f.rho[k] * f.c[k] - 1.0).abs() < 1e-14);
        match g.tags[k] {
            NodeTag::Degenerate => {
                assert!((f.phi[k] - s - eps).abs() < 1e-12);
                assert!(f.l2[k] < 1.0);
            }
            NodeTag::Interior => assert!(f.l2[k] < 1.0),
            NodeTag::Wing => slip = slip.max((v[0] * beta.cos() + v[1] * beta.sin()).abs()),
            NodeTag::Sym => slip = slip.max(v[1].abs()),
            NodeTag::CornerO => {}
        }
        assert!(f.phi[k] >= s + eps - 1e-8);
        let d2 = v[0] * v[0] + v[1] * v[1];
        if g.tags[k] == NodeTag::Interior {
            inner = inner.max(d2);
        } else {
            outer = outer.max(d2);
        }
    }
    assert!(slip < 1e-6, "{slip}");
    // No interior maximum of |Dphi|^2 beyond the discretisation error.
    assert!(inner <= outer + 1e-3, "{inner} {outer}");
}

#[test]
fn warm_start_converges() {
    let eps = 0.05;
    let disc = physical(0.1, 33);
    let cfg = SolverConfig::default();
    let res = continuation_solve(&disc, eps, &cfg, None).unwrap();
    let mut psi = res.psi.clone();
    let rep = newton_solve(&disc, 0.95, eps, &mut psi, &cfg.newton).unwrap();
    assert!(rep.residual < 1e-10);
}

#[test]
fn step_underflow_is_reported() {
    let eps = 0.05;
    let disc = physical(0.1, 17);
    let mut cfg = SolverConfig::default();
    cfg.newton.max_iterations = 1;
    cfg.newton.tolerance = 1e-30;
    match continuation_solve(&disc, eps, &cfg, None) {
        Err(Error::NewtonDivergence { .. }) | Err(Error::StepUnderflow { .. }) => {}
        other => panic!("expected a solver failure, got {other:?}"),
    }
}

#[test]
fn config_validation() {
    let mut cfg = SolverConfig::default();
    assert!(cfg.validate().is_ok());
    assert_eq!(cfg.eps_schedule, vec![0.2, 0.1, 0.05, 0.025, 0.0125]);
    cfg.eps_schedule = vec![0.1, 0.2];
    assert!(cfg.validate().is_err());
    cfg.eps_schedule = vec![0.1, -0.1];
    assert!(cfg.validate().is_err());
    let mut cfg = SolverConfig::default();
    cfg.newton.tolerance = 0.0;
    assert!(cfg.validate().is_err());
    assert!((SolverConfig::psi_floor(0.05) - 0.5 * 1.05f64.acosh()).abs() < 1e-15);
}

#[test]
fn epsilon_sweep_behaviour() {
    let disc = physical(0.1, 33);
    let cfg = SolverConfig::default();
    let sw = epsilon_sweep(&disc, &cfg, &fs().gas);
    assert!(sw.failure.is_none(), "{:?}", sw.failure);
    assert_eq!(sw.fields.len(), cfg.eps_schedule.len());
    let g = &disc.grid;
    let s: Vec<f64> = g.nodes.iter().map(|x| (1.0 + x[0] * x[0] + x[1] * x[1]).sqrt()).collect();
    for f in &sw.fields {
        for k in (0..g.len()).filter(|&k| g.tags[k] == NodeTag::Degenerate) {
            assert_eq!(f.phi[k], s[k] * (1.0 + f.eps / s[k]).acosh().cosh());
            assert!((f.phi[k] - s[k] - f.eps).abs() < 1e-12);
        }
    }
    for w in sw.fields.windows(2) {
        for k in 0..g.len() {
            assert!(w[1].phi[k] <= w[0].phi[k] + 5e-3);
        }
    }
    let ex = sw.extrapolated_phi.unwrap();
    for k in 0..g.len() {
        assert!(ex[k] >= s[k] - 1e-6);
        if g.tags[k] == NodeTag::Degenerate {
            assert!((ex[k] - s[k]).abs() < 2e-3);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn zero_order_derivative_is_negative(
        x in -1.0f64..1.0, y in -1.0f64..1.0, psi in 0.01f64..3.0,
        g1 in -2.0f64..2.0, g2 in -2.0f64..2.0, h11 in -5.0f64..5.0, h12 in -5.0f64..5.0, h22 in -5.0f64..5.0,
        mu in 0.0f64..=1.0,
    ) {
        let p = pde_point(Vector2::new(x, y), psi, Vector2::new(g1, g2), Matrix2::new(h11, h12, h12, h22), mu);
        prop_assert!(p.f_psi < 0.0);
    }
}
