use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("time ordering violated: t = {t} s precedes t' = {t_prime} s")]
    TimeOrder { t: f64, t_prime: f64 },

    #[error("cubic roots are degenerate (min separation {separation:e}); partial fractions are undefined")]
    DegenerateRoots { separation: f64 },

    #[error("quadrature did not converge: doubling the node count changed the kernel by {change:e} (tolerance {tolerance:e})")]
    QuadratureNotConverged { change: f64, tolerance: f64 },

    #[error("step size rejected: rate * dt = {product:.4} exceeds {limit} (rate {rate:e} 1/s, dt {dt:e} s)")]
    StepTooLarge { rate: f64, dt: f64, product: f64, limit: f64 },

    #[error("non-finite amplitude at step {step} (t = {t:e} s): {value}")]
    NonFinite { step: usize, t: f64, value: String },

    #[error("density matrix is not physical: {0}")]
    Unphysical(String),

    #[error("malformed amplitude record: {0}")]
    Record(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
