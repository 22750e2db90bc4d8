use std::path::PathBuf;
use std::process::ExitCode;

use caretflow::GasConstants;
use caretflow_cli::commands;
use caretflow_cli::emit::write_file;
use caretflow_cli::CliError;
use clap::{Parser, Subcommand, ValueEnum};

/// Self-similar Chaplygin-gas flow past a conical wing with a
/// Lambda-shaped cross section.
#[derive(Parser)]
#[command(name = "caretflow", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Downstream state of a planar shock, printed as JSON.
    Polar {
        #[arg(long)]
        u0: f64,
        #[arg(long)]
        c0: f64,
        /// Deflection angle (radians unless --deg).
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        deg: bool,
    },
    /// Critical angles, regime and shock pattern. Prints the report as
    /// JSON, or writes geometry.json and geometry.svg with --out.
    Geometry {
        #[command(flatten)]
        flow: Flow,
        /// Anhedral angle.
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regularized interior solve over the eps schedule.
    Solve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Oracle suite for the configured case; writes verify.json.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Regime atlas CSV over a parameter range (steps + 1 samples).
    Sweep {
        #[arg(long, value_enum)]
        over: Over,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        flow: Flow,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct Flow {
    /// Normalised free-stream speed (> 1).
    #[arg(long)]
    q_inf: f64,
    /// Attack angle.
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Sweep angle.
    #[arg(long, allow_hyphen_values = true)]
    sigma: f64,
    /// Read every angle in degrees.
    #[arg(long)]
    deg: bool,
}

impl Flow {
    fn angle(&self, v: f64) -> f64 {
        if self.deg {
            v.to_radians()
        } else {
            v
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Over {
    Beta,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Polar { u0, c0, theta, deg } => {
            let theta = if deg { theta.to_radians() } else { theta };
            commands::print_json(&commands::polar(u0, c0, theta)?)
        }
        Command::Geometry { flow, beta, out } => {
            let (_, report) =
                commands::regime_report(flow.q_inf, flow.angle(flow.alpha), flow.angle(flow.sigma), flow.angle(beta), GasConstants::default())?;
            match out {
                Some(dir) => commands::emit_geometry(&report, &dir),
                None => commands::print_json(&report),
            }
        }
        Command::Solve { config } => commands::solve(&config).map(|_| ()),
        Command::Verify { config } => commands::verify(&config).map(|_| ()),
        Command::Sweep { over: Over::Beta, from, to, steps, flow, out } => {
            let csv =
                commands::beta_atlas(flow.q_inf, flow.angle(flow.alpha), flow.angle(flow.sigma), flow.angle(from), flow.angle(to), steps)?;
            match out {
                Some(path) => write_file(&path, &csv),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("caretflow: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
