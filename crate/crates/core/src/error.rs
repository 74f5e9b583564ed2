use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent p must be odd, got {0}")]
    EvenExponent(i64),

    #[error("exponent p must be at least 3, got {0}")]
    ExponentTooSmall(i64),

    #[error("damping coefficient mu must be non-negative, got {0}")]
    NegativeDamping(f64),

    #[error("restoring coefficient alpha must be positive, got {0}")]
    NonPositiveRestoring(f64),

    #[error("parameter {name} must be finite, got {value}")]
    NonFiniteParameter { name: &'static str, value: f64 },

    #[error("state ({x}, {y}) is not finite")]
    NonFiniteState { x: f64, y: f64 },

    /// An intermediate value overflowed or became NaN.
    #[error("non-finite result while evaluating {0}")]
    Overflow(&'static str),

    #[error("invalid scheme configuration: {0}")]
    InvalidConfig(String),

    /// Newton and the bisection fallback both failed to meet the tolerance.
    #[error(
        "nonlinear solve did not converge after {iterations} iterations \
         (last iterate {last_iterate:e}, residual {residual:e})"
    )]
    NonConvergence {
        last_iterate: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("step {step} (t = {time}) failed: {source}")]
    StepFailed {
        step: usize,
        time: f64,
        source: Box<Error>,
    },

    #[error("invalid fit window [{lo}, {hi}]: {reason}")]
    InvalidWindow {
        lo: f64,
        hi: f64,
        reason: &'static str,
    },

    #[error("no samples inside fit window [{lo}, {hi}]")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("all {count} samples inside the fit window fall below the value floor")]
    AllClipped { count: usize },

    #[error("fit needs at least {required} samples, found {found}")]
    TooFewSamples { found: usize, required: usize },

    #[error("check requires mu > 0 (got mu = {0})")]
    RequiresDamping(f64),

    #[error("modified energy is below the floor at every sample")]
    Degenerate,

    #[error("query time {t} lies outside trajectory span [0, {t_end}]")]
    QueryOutOfRange { t: f64, t_end: f64 },

    #[error("trajectory has no samples")]
    EmptyTrajectory,
}
