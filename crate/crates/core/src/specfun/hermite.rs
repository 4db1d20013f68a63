//! Hermite function H_ν(z) of complex order and argument.
//!
//! Three evaluation routes, picked per point:
//!
//! * **Kummer pair** (small and moderate |z²|):
//!   H_ν(z) = 2^ν √π [ M(−ν/2, ½, z²)/Γ((1−ν)/2) − 2z M((1−ν)/2, 3/2, z²)/Γ(−ν/2) ].
//!   The two series cancel badly when re(z²) ≥ 0 or z² is near the imaginary
//!   axis (the loss grows like e^{|z²|}), so the rounding error is estimated
//!   from Σ|terms| and the result is only accepted when it meets `rel_tol`.
//! * **Taylor continuation** of H″ − 2zH′ + 2νH = 0 along the ray through z,
//!   used when the Kummer pair is too inaccurate but |z²| is still below the
//!   asymptotic threshold. In |arg z| < π/4, where H_ν is recessive, the
//!   continuation runs inward from the asymptotic region; elsewhere it runs
//!   outward from a point close to the origin. Both directions are stable.
//! * **Large-argument expansion** for |z²| ≥ `asymptotic_threshold`:
//!   H_ν(z) ~ (2z)^ν Σ (−1)^m (−ν)_{2m} / (m! (2z)^{2m}), plus the
//!   e^{z²} z^{−ν−1} contribution beyond the Stokes lines |arg z| = π/2.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::gamma::recip_gamma;
use super::kummer::kummer_m_bounded;
use super::{ensure_finite, EvalPolicy, SpecFunError};

const ASYMPTOTIC_MAX_TERMS: usize = 20;
/// |z²| at which inward continuations start; the capped expansion is good to
/// ~1e-13 there.
const CONTINUATION_START_SQ: f64 = 36.0;
/// |z| at which outward continuations start; the Kummer pair loses at most a
/// factor e^{2.25} there.
const CONTINUATION_START_ABS: f64 = 1.5;
/// Half-width of the crossover band around the asymptotic threshold, as a
/// fraction of the threshold.
const CROSSOVER_BAND: f64 = 0.1;

/// Which route produced a Hermite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HermiteMethod {
    KummerSeries,
    TaylorContinuation,
    Asymptotic,
}

/// Raised (as a value, not an error) when |z²| lies close to the switch
/// between the convergent and the asymptotic routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorWarning {
    pub abs_z_squared: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteEval {
    pub value: Complex64,
    pub method: HermiteMethod,
    /// Estimated absolute error of `value`.
    pub error_estimate: f64,
    pub warning: Option<SectorWarning>,
}

/// Both routes at the same point, for crossover continuity checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverPair {
    pub convergent: HermiteEval,
    pub asymptotic: HermiteEval,
}

impl CrossoverPair {
    pub fn relative_gap(&self) -> f64 {
        (self.convergent.value - self.asymptotic.value).norm() / self.convergent.value.norm()
    }
}

/// Hermite function H_ν(z) for arbitrary complex ν and z.
pub fn hermite_h(nu: Complex64, z: Complex64, policy: &EvalPolicy) -> Result<Complex64, SpecFunError> {
    Ok(hermite_h_checked(nu, z, policy)?.value)
}

/// dH_ν/dz = 2ν H_{ν−1}(z).
pub fn hermite_h_derivative(nu: Complex64, z: Complex64, policy: &EvalPolicy) -> Result<Complex64, SpecFunError> {
    if nu == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(2.0 * nu * hermite_h(nu - 1.0, z, policy)?)
}

/// Like [`hermite_h`], but also reports the route taken, an error estimate
/// and a [`SectorWarning`] inside the crossover band.
pub fn hermite_h_checked(nu: Complex64, z: Complex64, policy: &EvalPolicy) -> Result<HermiteEval, SpecFunError> {
    policy.validate()?;
    let abs_sq = (z * z).norm();
    let warning = (abs_sq >= policy.asymptotic_threshold * (1.0 - CROSSOVER_BAND)
        && abs_sq <= policy.asymptotic_threshold * (1.0 + CROSSOVER_BAND))
        .then_some(SectorWarning {
            abs_z_squared: abs_sq,
            threshold: policy.asymptotic_threshold,
        });
    let mut eval = if abs_sq >= policy.asymptotic_threshold {
        asymptotic(nu, z)
    } else {
        convergent(nu, z, policy)?
    };
    eval.value = ensure_finite(eval.value, "Hermite function")?;
    eval.warning = warning;
    Ok(eval)
}

/// Evaluates H_ν(z) by both the convergent routes and the large-argument
/// expansion, regardless of the threshold.
pub fn hermite_h_both(nu: Complex64, z: Complex64, policy: &EvalPolicy) -> Result<CrossoverPair, SpecFunError> {
    policy.validate()?;
    Ok(CrossoverPair {
        convergent: convergent(nu, z, policy)?,
        asymptotic: asymptotic(nu, z),
    })
}

fn convergent(nu: Complex64, z: Complex64, policy: &EvalPolicy) -> Result<HermiteEval, SpecFunError> {
    let (value, error) = kummer_pair(nu, z, policy)?;
    if error <= policy.rel_tol * value.norm() || z.norm() <= CONTINUATION_START_ABS {
        return Ok(HermiteEval {
            value,
            method: HermiteMethod::KummerSeries,
            error_estimate: error,
            warning: None,
        });
    }
    continuation(nu, z, policy)
}

/// Two-Kummer representation with a rounding-error estimate.
fn kummer_pair(nu: Complex64, z: Complex64, policy: &EvalPolicy) -> Result<(Complex64, f64), SpecFunError> {
    let x = z * z;
    let even = kummer_m_bounded(-nu / 2.0, Complex64::new(0.5, 0.0), x, policy)?;
    let odd = kummer_m_bounded((1.0 - nu) / 2.0, Complex64::new(1.5, 0.0), x, policy)?;
    let g_even = recip_gamma((1.0 - nu) / 2.0);
    let g_odd = recip_gamma(-nu / 2.0);
    let prefactor = (nu * std::f64::consts::LN_2).exp() * PI.sqrt();
    let value = prefactor * (even.value * g_even - 2.0 * z * odd.value * g_odd);
    let spread = even.magnitude * g_even.norm() + 2.0 * z.norm() * odd.magnitude * g_odd.norm();
    let error = prefactor.norm() * spread * (4.0 * f64::EPSILON + policy.rel_tol * 0.1);
    Ok((value, error))
}

fn asymptotic(nu: Complex64, z: Complex64) -> HermiteEval {
    let inv_4z2 = (4.0 * z * z).inv();
    let (dominant_sum, dominant_tail) = smallest_term_sum(|m| {
        let m = m as f64;
        -(2.0 * m - nu) * (2.0 * m + 1.0 - nu) * inv_4z2 / (m + 1.0)
    });
    let ln_z = z.ln();
    let dominant = ((std::f64::consts::LN_2 + ln_z) * nu).exp();
    let mut value = dominant * dominant_sum;
    let mut error = (dominant * dominant_tail).norm();

    let arg = z.arg();
    if arg.abs() >= FRAC_PI_2 {
        // Beyond the Stokes line the e^{z²} solution is switched on; on the
        // line itself it carries half its multiplier.
        let multiplier = if arg.abs() == FRAC_PI_2 { 0.5 } else { 1.0 };
        let sigma = if arg > 0.0 { 1.0 } else { -1.0 };
        let (rec_sum, rec_tail) = smallest_term_sum(|m| {
            let m = m as f64;
            (nu + 1.0 + 2.0 * m) * (nu + 2.0 + 2.0 * m) * inv_4z2 / (m + 1.0)
        });
        let stokes = Complex64::new(0.0, sigma * PI) * nu;
        let coeff = -PI.sqrt() * multiplier * stokes.exp() * recip_gamma(-nu);
        let recessive = coeff * (z * z - (nu + 1.0) * ln_z).exp();
        value += recessive * rec_sum;
        error += (recessive * rec_tail).norm();
    }
    HermiteEval {
        value,
        method: HermiteMethod::Asymptotic,
        error_estimate: error,
        warning: None,
    }
}

/// Sums 1 + t₁ + t₂ + … with t_{m+1} = t_m · ratio(m), stopping before the
/// terms start to grow, once they drop below machine precision, or after
/// [`ASYMPTOTIC_MAX_TERMS`] terms. Returns the sum and the first omitted term.
fn smallest_term_sum(ratio: impl Fn(usize) -> Complex64) -> (Complex64, Complex64) {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for m in 0..ASYMPTOTIC_MAX_TERMS - 1 {
        let next = term * ratio(m);
        if next.norm() >= term.norm() {
            return (sum, term);
        }
        if next.norm() <= f64::EPSILON * 0.5 * sum.norm() {
            return (sum + next, next * ratio(m + 1));
        }
        sum += next;
        term = next;
    }
    (sum, term * ratio(ASYMPTOTIC_MAX_TERMS - 1))
}

fn continuation(nu: Complex64, z: Complex64, policy: &EvalPolicy) -> Result<HermiteEval, SpecFunError> {
    let direction = z / z.norm();
    let x = z * z;
    let inward = x.re > 0.0 && z.re > 0.0;
    let start = if inward {
        direction * CONTINUATION_START_SQ.max(policy.asymptotic_threshold).sqrt()
    } else {
        direction * CONTINUATION_START_ABS
    };
    let (h0, dh0, err0) = if inward {
        let h = asymptotic(nu, start);
        let hm1 = asymptotic(nu - 1.0, start);
        (h.value, 2.0 * nu * hm1.value, h.error_estimate / h.value.norm())
    } else {
        let (h, eh) = kummer_pair(nu, start, policy)?;
        let (hm1, _) = kummer_pair(nu - 1.0, start, policy)?;
        (h, 2.0 * nu * hm1, eh / h.norm())
    };
    let (value, _) = integrate_hermite_ode(nu, start, h0, dh0, z)?;
    let steps_error = 64.0 * f64::EPSILON * (z - start).norm().max(1.0) * z.norm().max(1.0);
    Ok(HermiteEval {
        value,
        method: HermiteMethod::TaylorContinuation,
        error_estimate: value.norm() * (err0.max(f64::EPSILON) + steps_error),
        warning: None,
    })
}

/// Carries (u, u′) for u″ = 2zu′ − 2νu along the straight segment from `from`
/// to `to` with local Taylor expansions.
fn integrate_hermite_ode(
    nu: Complex64,
    from: Complex64,
    mut u: Complex64,
    mut du: Complex64,
    to: Complex64,
) -> Result<(Complex64, Complex64), SpecFunError> {
    let mut here = from;
    let mut guard = 0;
    while (to - here).norm() > 0.0 {
        let max_step = 0.5 / here.norm().max(1.0);
        let remaining = to - here;
        let step = if remaining.norm() <= max_step {
            remaining
        } else {
            remaining * (max_step / remaining.norm())
        };
        let (nu_next, du_next) = taylor_step(nu, here, u, du, step)?;
        u = nu_next;
        du = du_next;
        here = if step == remaining { to } else { here + step };
        guard += 1;
        if guard > 100_000 {
            return Err(SpecFunError::NoConvergence {
                function: "hermite continuation",
                terms: guard,
            });
        }
    }
    Ok((u, du))
}

fn taylor_step(
    nu: Complex64,
    center: Complex64,
    u: Complex64,
    du: Complex64,
    step: Complex64,
) -> Result<(Complex64, Complex64), SpecFunError> {
    // b_n = a_n step^n, with (n+1)(n+2) a_{n+2} = 2 center (n+1) a_{n+1} + 2 (n − ν) a_n
    let two_cd = 2.0 * center * step;
    let two_dd = 2.0 * step * step;
    let mut b_prev = u;
    let mut b = du * step;
    let mut value = b_prev + b;
    let mut slope = b; // Σ n b_n
    for n in 0..400usize {
        let nf = n as f64;
        let b_next = (two_cd * (nf + 1.0) * b + two_dd * (nf - nu) * b_prev) / ((nf + 1.0) * (nf + 2.0));
        value += b_next;
        slope += (nf + 2.0) * b_next;
        if n > 2 && b_next.norm() + b.norm() <= 0.25 * f64::EPSILON * value.norm().max(slope.norm()) {
            return Ok((value, slope / step));
        }
        b_prev = b;
        b = b_next;
    }
    Err(SpecFunError::NoConvergence {
        function: "hermite taylor step",
        terms: 400,
    })
}
