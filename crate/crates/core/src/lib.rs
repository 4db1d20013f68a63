//! Inverse-square-root level-crossing two-state model.
//!
//! The detuning δ_t = Δ₀ + Δ₁/√t with constant Rabi frequency U₀ admits
//! closed-form solutions in terms of two Hermite functions of complex order.
//! The crate provides:
//!
//! * [`specfun`]: complex gamma, erfc, Kummer M and Hermite H_ν(z);
//! * [`field`]: the field configuration and its scalar bookkeeping;
//! * [`closed_form`]: fundamental solutions, initial-value matching, scattering
//!   amplitudes and their weak/strong-field approximations;
//! * [`heun`]: the bi-confluent Heun reduction and its terminating Hermite series;
//! * [`oracle`]: an adaptive Runge-Kutta integrator of the two-state system;
//! * [`verify`]: the acceptance checks shared by the test suite and the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
pub mod field;
pub mod heun;
pub mod oracle;
pub mod specfun;
pub mod verify;

use thiserror::Error;

pub use field::FieldConfig;
pub use specfun::{EvalPolicy, SpecFunError};

/// Errors raised by the model-level modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid field configuration: {0}")]
    InvalidConfig(String),

    #[error("outside the domain: {0}")]
    Domain(String),

    /// The scattering quantities assume Δ₀ > 0.
    #[error("sign convention violated: {0}")]
    Convention(String),

    #[error("initial-value matching is singular (condition number {condition:e})")]
    SingularMatch { condition: f64 },

    #[error("class k = {k} is not supported, only k = 1")]
    UnsupportedClass { k: f64 },

    #[error("recurrence degenerates: R_{n} = 0")]
    DegenerateRecurrence { n: usize },

    #[error("non-terminating series, tail estimate {tail:e} above tolerance")]
    Truncation { tail: f64 },

    #[error("integration exceeded {max_steps} steps at t = {t}")]
    StepLimitExceeded { max_steps: usize, t: f64 },

    #[error("step size underflow at t = {t}")]
    ToleranceUnachievable { t: f64 },

    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

pub type Result<T> = std::result::Result<T, ModelError>;
