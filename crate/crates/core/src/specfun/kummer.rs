use num_complex::Complex64;

use super::{ensure_finite, is_nonpositive_integer, EvalPolicy, SpecFunError};

/// Kummer's confluent hypergeometric function M(a, b, z) = ₁F₁(a; b; z).
///
/// Summed as a Taylor series; for re z < 0 the Kummer transformation
/// M(a, b, z) = e^z M(b − a, b, −z) is applied first.
pub fn kummer_m(a: Complex64, b: Complex64, z: Complex64, policy: &EvalPolicy) -> Result<Complex64, SpecFunError> {
    policy.validate()?;
    Ok(kummer_m_bounded(a, b, z, policy)?.value)
}

/// Series value together with Σ|terms| (scaled by |e^z| after a Kummer
/// transformation), which bounds the rounding error of the sum.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BoundedSum {
    pub value: Complex64,
    pub magnitude: f64,
}

pub(crate) fn kummer_m_bounded(
    a: Complex64,
    b: Complex64,
    z: Complex64,
    policy: &EvalPolicy,
) -> Result<BoundedSum, SpecFunError> {
    if is_nonpositive_integer(b) {
        return Err(SpecFunError::ParameterPole { b });
    }
    if z.re < 0.0 {
        let inner = taylor(b - a, b, -z, policy)?;
        let scale = z.exp();
        Ok(BoundedSum {
            value: ensure_finite(scale * inner.value, "Kummer function")?,
            magnitude: scale.norm() * inner.magnitude,
        })
    } else {
        taylor(a, b, z, policy)
    }
}

fn taylor(a: Complex64, b: Complex64, z: Complex64, policy: &EvalPolicy) -> Result<BoundedSum, SpecFunError> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut magnitude = 1.0;
    if z.norm() == 0.0 {
        return Ok(BoundedSum { value: sum, magnitude });
    }
    let mut small_in_a_row = 0;
    for n in 0..policy.max_terms {
        let nf = n as f64;
        term *= (a + nf) / (b + nf) * z / (nf + 1.0);
        if term.norm() == 0.0 {
            // a is a non-positive integer: the series terminated
            return Ok(BoundedSum { value: sum, magnitude });
        }
        sum += term;
        magnitude += term.norm();
        let past_peak = (a + nf + 1.0).norm() * z.norm() < (b + nf + 1.0).norm() * (nf + 2.0);
        if past_peak && term.norm() <= policy.rel_tol * sum.norm().max(f64::EPSILON * magnitude) {
            small_in_a_row += 1;
            if small_in_a_row == 2 {
                return Ok(BoundedSum {
                    value: ensure_finite(sum, "Kummer series")?,
                    magnitude,
                });
            }
        } else {
            small_in_a_row = 0;
        }
    }
    Err(SpecFunError::NoConvergence {
        function: "kummer_m",
        terms: policy.max_terms,
    })
}
