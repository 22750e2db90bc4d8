use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use caretflow::geometry::{classify_regime, RegimeReport, WingAngles};
use caretflow::mesh::{build_domain, generate_grid, NodeTag};
use caretflow::oracle::{run_suite, SuiteGrid, SuiteReport};
use caretflow::solver::{epsilon_sweep, BoundaryData, Discretization, SolutionField, StageRecord};
use caretflow::{polar_state, FreeStream, GasConstants, PolarState};
use serde::Serialize;

use crate::config::{load_config, RunConfig};
use crate::emit::{atlas_csv, emit_field_csv, emit_report_json, grid_csv, to_json, write_file};
use crate::svg::geometry_svg;
use crate::CliError;

pub fn polar(u0: f64, c0: f64, theta: f64) -> Result<PolarState, CliError> {
    Ok(polar_state(u0, c0, theta)?)
}

pub fn regime_report(q_inf: f64, alpha: f64, sigma: f64, beta: f64, gas: GasConstants) -> Result<(FreeStream, RegimeReport), CliError> {
    let fs = FreeStream::new(q_inf, alpha, gas)?;
    let angles = WingAngles::new(sigma, beta)?;
    let report = classify_regime(&fs, angles);
    Ok((fs, report))
}

/// Writes `geometry.json` and `geometry.svg` into `dir`.
pub fn emit_geometry(report: &RegimeReport, dir: &Path) -> Result<(), CliError> {
    create_dir(dir)?;
    emit_report_json(report, &dir.join("geometry.json"))?;
    write_file(&dir.join("geometry.svg"), &geometry_svg(report))
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

/// Run metadata, kept out of the data files so those stay deterministic.
#[derive(Debug, Serialize)]
struct Meta<'a> {
    program: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a Path,
    started_unix_s: u64,
    elapsed_s: f64,
    threads: usize,
}

fn write_meta(dir: &Path, command: &str, config: &Path, started: SystemTime, clock: Instant) -> Result<(), CliError> {
    let meta = Meta {
        program: "caretflow",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        started_unix_s: started.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        elapsed_s: clock.elapsed().as_secs_f64(),
        threads: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    emit_report_json(&meta, &dir.join("meta.json"))
}

#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub eps: f64,
    pub mu: f64,
    pub residual: f64,
    pub ellipticity_margin: f64,
    pub max_interior_l2: f64,
    pub max_slip: f64,
    pub stages: Vec<StageRecord>,
}

impl RunSummary {
    fn of(f: &SolutionField) -> Self {
        let g = &f.grid;
        let beta = g.domain.beta;
        let (mut l2, mut slip) = (0.0f64, 0.0f64);
        for k in 0..g.len() {
            let v = f.velocity[k];
            match g.tags[k] {
                NodeTag::Interior => l2 = l2.max(f.l2[k]),
                NodeTag::Wing => slip = slip.max((v[0] * beta.cos() + v[1] * beta.sin()).abs()),
                NodeTag::Sym => slip = slip.max(v[1].abs()),
                _ => {}
            }
        }
        Self {
            eps: f.eps,
            mu: f.mu,
            residual: f.diagnostics.residual,
            ellipticity_margin: f.diagnostics.ellipticity_margin,
            max_interior_l2: l2,
            max_slip: slip,
            stages: f.diagnostics.stages.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SweepFailure {
    pub eps: f64,
    pub error: String,
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub config: RunConfig,
    pub geometry: RegimeReport,
    pub runs: Vec<RunSummary>,
    /// `min(phi_0 - sqrt(1 + |xi|^2))` of the eps -> 0 extrapolation.
    pub extrapolated_min_lift: Option<f64>,
    pub failure: Option<SweepFailure>,
}

/// Regularized solve over the eps schedule. Outputs are written even when
/// the sweep stops early; the error is returned afterwards.
pub fn solve(config_path: &Path) -> Result<SolveReport, CliError> {
    let started = SystemTime::now();
    let clock = Instant::now();
    let cfg = load_config(config_path)?;
    let (_, report) = regime_report(cfg.q_inf, cfg.alpha, cfg.sigma, cfg.beta, cfg.gas)?;
    let domain = build_domain(&report)?;
    let grid = generate_grid(&domain, cfg.grid.ns, cfg.grid.nt, cfg.grid.stretch)?;
    let disc = Discretization::new(grid, BoundaryData::Physical);
    let sweep = epsilon_sweep(&disc, &cfg.solver, &cfg.gas);

    let dir = cfg.output.dir.clone();
    create_dir(&dir)?;
    if cfg.output.csv {
        write_file(&dir.join("grid.csv"), &grid_csv(&disc.grid))?;
        if let Some(f) = sweep.fields.last() {
            emit_field_csv(f, &dir.join("field.csv"))?;
        }
    }
    if cfg.output.svg {
        write_file(&dir.join("geometry.svg"), &geometry_svg(&report))?;
    }
    let extrapolated_min_lift = sweep.extrapolated_phi.as_ref().map(|ex| {
        disc.radial_weight.iter().zip(ex).map(|(s, p)| p - s).fold(f64::INFINITY, f64::min)
    });
    let out = SolveReport {
        config: cfg.clone(),
        geometry: report,
        runs: sweep.fields.iter().map(RunSummary::of).collect(),
        extrapolated_min_lift,
        failure: sweep.failure.as_ref().map(|(eps, e)| SweepFailure { eps: *eps, error: e.to_string() }),
    };
    if cfg.output.json {
        emit_report_json(&out, &dir.join("solve.json"))?;
    }
    write_meta(&dir, "solve", config_path, started, clock)?;
    match &sweep.failure {
        Some((eps, e)) => Err(CliError::Solver(format!("sweep stopped at eps = {eps}: {e}"))),
        None => Ok(out),
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    #[serde(flatten)]
    pub suite: SuiteReport,
}

/// Full oracle suite; writes `verify.json`. A failed property is reported
/// as a solver failure after the file is written.
pub fn verify(config_path: &Path) -> Result<VerifyReport, CliError> {
    let started = SystemTime::now();
    let clock = Instant::now();
    let cfg = load_config(config_path)?;
    let (fs, report) = regime_report(cfg.q_inf, cfg.alpha, cfg.sigma, cfg.beta, cfg.gas)?;
    let grid = SuiteGrid { ns: cfg.grid.ns, nt: cfg.grid.nt, stretch: cfg.grid.stretch };
    let suite = run_suite(&fs, &report, grid, &cfg.solver, &cfg.verify)?;
    let dir = cfg.output.dir.clone();
    create_dir(&dir)?;
    let out = VerifyReport { config: cfg, suite };
    emit_report_json(&out, &dir.join("verify.json"))?;
    write_meta(&dir, "verify", config_path, started, clock)?;
    if out.suite.passed {
        Ok(out)
    } else {
        let failed: Vec<&str> = out.suite.properties.iter().filter(|p| !p.passed).map(|p| p.name.as_str()).collect();
        Err(CliError::Solver(format!("failed properties: {}", failed.join(", "))))
    }
}

/// Regime atlas over `steps + 1` equally spaced values of beta.
pub fn beta_atlas(q_inf: f64, alpha: f64, sigma: f64, from: f64, to: f64, steps: usize) -> Result<String, CliError> {
    if steps == 0 {
        return Err(CliError::Validation("`steps`: must be at least 1".into()));
    }
    let mut reports = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let beta = from + (to - from) * k as f64 / steps as f64;
        reports.push(regime_report(q_inf, alpha, sigma, beta, GasConstants::default())?.1);
    }
    Ok(atlas_csv(&reports))
}

pub fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    print!("{}", to_json(value)?);
    Ok(())
}
