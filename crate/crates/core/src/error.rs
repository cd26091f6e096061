//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("step size underflow at t = {t:.6e}")]
    StepUnderflow { t: f64 },

    #[error("non-finite state detected at t = {t:.6e}")]
    NonFinite { t: f64 },

    #[error("step limit exceeded at t = {t:.6e}")]
    StepLimit { t: f64 },

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("cubic has complex roots (discriminant {disc:.6e} < 0)")]
    ComplexRoots { disc: f64 },

    #[error("matrix is not Hermitian (max deviation {dev:.3e})")]
    NotHermitian { dev: f64 },

    #[error("degenerate orbit: {0}")]
    DegenerateOrbit(String),

    #[error("no real oscillation: {0}")]
    NoRealOscillation(String),

    #[error("inconsistent initial condition: {0}")]
    InconsistentInitialCondition(String),
}
