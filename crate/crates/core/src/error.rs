use thiserror::Error;

/// Errors raised anywhere in the flow construction or the interior solve.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("normal-plane flow is not supersonic (u0 = {u0}, c0 = {c0})")]
    SubsonicNormalFlow { u0: f64, c0: f64 },

    #[error("deflection {theta} reaches the shock angle {gamma}: downstream density concentrates")]
    Concentration { theta: f64, gamma: f64 },

    #[error("degenerate construction: {0}")]
    Degenerate(String),

    #[error("geometric construction failed: {0}")]
    Construction(String),

    #[error("no beta0 located on the scanned bracket ({} samples of g)", trace.len())]
    NoBeta0 { trace: Vec<(f64, f64)> },

    #[error("domain is not star-shaped about O at polar angle {theta}")]
    NotStarShaped { theta: f64 },

    #[error("grid map has non-positive Jacobian at node ({i}, {j})")]
    NonPositiveJacobian { i: usize, j: usize },

    #[error("regime {0} admits no interior problem")]
    NoInteriorProblem(String),

    #[error("non-finite residual at node ({i}, {j})")]
    NonFinite { i: usize, j: usize },

    #[error("linearisation sign check failed at node ({i}, {j}): d_psi L = {value}")]
    SignCheck { i: usize, j: usize, value: f64 },

    #[error("sparse linear solve failed: {0}")]
    LinearSolve(String),

    #[error("Newton did not converge after {iterations} iterations (residual {residual:e})")]
    NewtonDivergence { iterations: usize, residual: f64 },

    #[error("continuation step underflow at mu = {mu} (step {step:e})")]
    StepUnderflow { mu: f64, step: f64 },

    #[error("ellipticity violated at node ({i}, {j}): c^2 = {c2}")]
    EllipticityLost { i: usize, j: usize, c2: f64 },

    #[error("no admissible eta samples for the {0} envelope")]
    EmptyEnvelope(&'static str),
}

impl Error {
    /// True for failures of the numerical solve (as opposed to bad input).
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. }
                | Error::SignCheck { .. }
                | Error::LinearSolve(_)
                | Error::NewtonDivergence { .. }
                | Error::StepUnderflow { .. }
                | Error::EllipticityLost { .. }
        )
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
