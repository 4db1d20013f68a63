//! Complex special functions used by the closed-form solutions.
//!
//! Everything here works on [`Complex64`] and uses the principal branch for
//! logarithms, fractional powers and square roots (argument in (−π, π]).
//!
//! | Function | Method |
//! |----------|--------|
//! | [`gamma_complex`], [`recip_gamma`] | Lanczos sum (g = 671/128) for re z ≥ 1/2, reflection otherwise |
//! | [`erfc_complex`] | Maclaurin series of erf, Laplace continued fraction of the Faddeeva function |
//! | [`kummer_m`] | Taylor series, Kummer transformation for re z < 0 |
//! | [`hermite_h`] | two-Kummer representation, Taylor continuation of the Hermite ODE, large-argument expansion |

mod erfc;
mod gamma;
mod hermite;
mod kummer;
mod policy;

pub use erfc::erfc_complex;
pub use gamma::{gamma_complex, ln_gamma_complex, recip_gamma};
pub use hermite::{
    hermite_h, hermite_h_both, hermite_h_checked, hermite_h_derivative, CrossoverPair, HermiteEval, HermiteMethod,
    SectorWarning,
};
pub use kummer::kummer_m;
pub use policy::EvalPolicy;

use num_complex::Complex64;
use thiserror::Error;

/// Failures of the special-function kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("gamma function pole at z = {z}")]
    Pole { z: Complex64 },

    #[error("{function} did not converge within {terms} terms")]
    NoConvergence { function: &'static str, terms: usize },

    #[error("confluent hypergeometric parameter b = {b} is a non-positive integer")]
    ParameterPole { b: Complex64 },

    #[error("invalid evaluation policy: {0}")]
    InvalidPolicy(String),

    #[error("non-finite {what}")]
    NonFinite { what: &'static str },
}

pub(crate) fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

pub(crate) fn ensure_finite(value: Complex64, what: &'static str) -> Result<Complex64, SpecFunError> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(SpecFunError::NonFinite { what })
    }
}
