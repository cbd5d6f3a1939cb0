use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the design, verification and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid transfer function: {0}")]
    InvalidTransferFunction(String),

    #[error("sample time mismatch: {left} s vs {right} s")]
    SampleTimeMismatch { left: f64, right: f64 },

    #[error("denominator vanishes at omega = {omega} rad/s (pole on the unit circle)")]
    PoleOnUnitCircle { omega: f64 },

    #[error("root finding did not converge (residual {residual:e}); best iterate {best:?}")]
    RootsNotConverged { residual: f64, best: Vec<Complex64> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite magnitude at omega = {omega} rad/s")]
    NonFiniteMagnitude { omega: f64 },

    #[error("plant magnitude is zero at omega = {omega} rad/s; module condition is unbounded")]
    DegenerateEllipse { omega: f64 },

    #[error("no phase crossover found on the frequency grid for {what}")]
    CrossoverNotFound { what: &'static str },

    #[error("no verified-stable configuration in the region")]
    NoStableConfiguration,

    #[error("algebraic loop: {0}")]
    AlgebraicLoop(String),

    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
