//! Run configuration: strict TOML with unit-suffixed angles.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use caretflow::oracle::SuiteConfig;
use caretflow::solver::SolverConfig;
use caretflow::GasConstants;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Fully defaulted and validated configuration. Angles are in radians.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub q_inf: f64,
    pub alpha: f64,
    pub sigma: f64,
    pub beta: f64,
    pub gas: GasConstants,
    pub grid: GridConfig,
    pub solver: SolverConfig,
    pub verify: SuiteConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    #[serde(alias = "Ns")]
    pub ns: usize,
    #[serde(alias = "Nt")]
    pub nt: usize,
    pub stretch: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { ns: 65, nt: 65, stretch: 1.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), csv: true, json: true, svg: true }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct GasSection {
    a: Option<f64>,
    rho_star: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    q_inf: f64,
    alpha_rad: Option<f64>,
    alpha_deg: Option<f64>,
    sigma_rad: Option<f64>,
    sigma_deg: Option<f64>,
    beta_rad: Option<f64>,
    beta_deg: Option<f64>,
    #[serde(default)]
    gas: GasSection,
    #[serde(default)]
    grid: GridConfig,
    #[serde(default)]
    solver: SolverConfig,
    #[serde(default)]
    verify: SuiteConfig,
    #[serde(default)]
    output: OutputConfig,
}

fn invalid(key: &str, constraint: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("`{key}`: {constraint}"))
}

fn angle(name: &str, rad: Option<f64>, deg: Option<f64>) -> Result<f64, CliError> {
    match (rad, deg) {
        (Some(r), None) => Ok(r),
        (None, Some(d)) => Ok(d.to_radians()),
        (None, None) => Err(invalid(name, format!("missing; give `{name}_rad` or `{name}_deg`"))),
        (Some(_), Some(_)) => Err(invalid(name, format!("give only one of `{name}_rad` and `{name}_deg`"))),
    }
}

fn key(name: &str, rad: Option<f64>) -> String {
    format!("{name}_{}", if rad.is_some() { "rad" } else { "deg" })
}

pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Validation(e.message().to_string()))?;
    if !(raw.q_inf > 1.0 && raw.q_inf.is_finite()) {
        return Err(invalid("q_inf", format!("must satisfy q_inf > 1 (normalised supersonic speed), got {}", raw.q_inf)));
    }
    let alpha = angle("alpha", raw.alpha_rad, raw.alpha_deg)?;
    let sigma = angle("sigma", raw.sigma_rad, raw.sigma_deg)?;
    let beta = angle("beta", raw.beta_rad, raw.beta_deg)?;
    if !(alpha > 0.0 && alpha < FRAC_PI_2) {
        return Err(invalid(&key("alpha", raw.alpha_rad), "must lie in (0, 90 deg)"));
    }
    if !(sigma > 0.0 && sigma < FRAC_PI_2) {
        return Err(invalid(&key("sigma", raw.sigma_rad), "must lie in (0, 90 deg)"));
    }
    if !(beta >= 0.0 && beta < FRAC_PI_2) {
        return Err(invalid(&key("beta", raw.beta_rad), "must lie in [0, 90 deg)"));
    }
    let gas = GasConstants { a: raw.gas.a.unwrap_or(1.0), rho_star: raw.gas.rho_star.unwrap_or(1.0) };
    if !(gas.a > 0.0 && gas.a.is_finite()) {
        return Err(invalid("gas.a", "must be positive"));
    }
    if !(gas.rho_star > 0.0 && gas.rho_star.is_finite()) {
        return Err(invalid("gas.rho_star", "must be positive"));
    }
    let g = raw.grid;
    if g.ns < 5 || g.nt < 5 {
        return Err(invalid("grid", "Ns and Nt must be at least 5"));
    }
    if !(g.stretch >= 1.0 && g.stretch.is_finite()) {
        return Err(invalid("grid.stretch", "must be at least 1"));
    }
    raw.solver.validate().map_err(|e| CliError::Validation(format!("solver: {e}")))?;
    let v = &raw.verify;
    if !(v.eps > 0.0 && v.eps.is_finite()) {
        return Err(invalid("verify.eps", "must be positive"));
    }
    if v.n_samples < 64 {
        return Err(invalid("verify.n_samples", "must be at least 64"));
    }
    if v.mms_sizes.len() < 2 || v.mms_sizes.windows(2).any(|w| w[1] <= w[0]) || v.mms_sizes[0] < 5 {
        return Err(invalid("verify.mms_sizes", "needs at least two increasing sizes, each at least 5"));
    }
    if v.jacobian_directions == 0 {
        return Err(invalid("verify.jacobian_directions", "must be positive"));
    }
    Ok(RunConfig {
        q_inf: raw.q_inf,
        alpha,
        sigma,
        beta,
        gas,
        grid: g,
        solver: raw.solver,
        verify: raw.verify,
        output: raw.output,
    })
}

pub fn load_config(path: &std::path::Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "q_inf = 2\nalpha_deg = 30\nsigma_rad = 0.5\nbeta_rad = 0.1\n";

    #[test]
    fn minimal_file_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.q_inf, 2.0);
        assert!((c.alpha - std::f64::consts::FRAC_PI_6).abs() < 1e-15);
        assert_eq!((c.sigma, c.beta), (0.5, 0.1));
        assert_eq!(c.gas, GasConstants { a: 1.0, rho_star: 1.0 });
        assert_eq!(c.grid, GridConfig { ns: 65, nt: 65, stretch: 1.05 });
        assert_eq!(c.solver, SolverConfig::default());
        assert_eq!(c.verify, SuiteConfig::default());
        assert_eq!(c.output, OutputConfig::default());
    }

    #[test]
    fn validation_errors_name_the_key() {
        let e = parse_config("q_inf = 0.9\nalpha_deg = 30\nsigma_rad = 0.5\nbeta_rad = 0.1\n").unwrap_err();
        assert!(e.to_string().contains("q_inf > 1"), "{e}");
        let e = parse_config("q_inf = 2\nalpha_deg = 30\nsigma_rad = 0.5\nbeta_deg = 95\n").unwrap_err();
        assert!(e.to_string().contains("beta_deg"), "{e}");
        let e = parse_config(&format!("{MINIMAL}beta = 0.1\n")).unwrap_err();
        assert!(e.to_string().contains("beta"), "{e}");
        let e = parse_config(&format!("{MINIMAL}[grid]\nNs = 33\nwidth = 2\n")).unwrap_err();
        assert!(e.to_string().contains("width"), "{e}");
        let e = parse_config("q_inf = 2\nalpha_deg = 30\nalpha_rad = 0.5\nsigma_rad = 0.5\nbeta_rad = 0.1\n").unwrap_err();
        assert!(e.to_string().contains("only one"), "{e}");
        let e = parse_config(&format!("{MINIMAL}[solver]\neps_schedule = [0.1, 0.2]\n")).unwrap_err();
        assert!(e.to_string().contains("eps_schedule"), "{e}");
        assert!(matches!(e, CliError::Validation(_)));
    }

    #[test]
    fn grid_aliases_and_sections() {
        let c = parse_config(&format!(
            "{MINIMAL}[grid]\nNs = 33\nNt = 17\n[solver.newton]\nmax_iterations = 12\n[output]\ndir = \"x\"\nsvg = false\n"
        ))
        .unwrap();
        assert_eq!((c.grid.ns, c.grid.nt), (33, 17));
        assert_eq!(c.solver.newton.max_iterations, 12);
        assert_eq!(c.solver.newton.tolerance, 1e-10);
        assert!(!c.output.svg && c.output.csv);
    }
}
