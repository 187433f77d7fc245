use thiserror::Error;

/// Errors raised by the solvers and evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of an operation.
    #[error("domain error: {field} = {value}: {reason}")]
    Domain {
        field: &'static str,
        value: f64,
        reason: String,
    },

    /// A configuration that cannot be run (grid too small, bracket not found, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Requested time step exceeds the explicit stability bound.
    #[error("time step {dt:e} exceeds stability bound {bound:e}")]
    StepTooLarge { dt: f64, bound: f64 },

    /// A coefficient that must stay positive went nonpositive during a run.
    #[error("instability in {model}: {what} = {value:e} at x = {x}")]
    Instability {
        model: &'static str,
        what: &'static str,
        value: f64,
        x: f64,
    },

    /// The state became non-finite or significantly negative.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// Shooting trajectory hit y <= 0 (shooting parameter too negative).
    #[error("shooting failure at x = {x}: y = {y:e}")]
    ShootingFailure { x: f64, y: f64 },

    /// The adaptive integrator could not make progress.
    #[error("step size underflow at x = {x} (h = {h:e})")]
    Stiffness { x: f64, h: f64 },
}

impl Error {
    pub(crate) fn domain(field: &'static str, value: f64, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            value,
            reason: reason.into(),
        }
    }

    /// True for errors caused by invalid input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Domain { .. } | Error::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
