//! Bi-confluent Heun reduction of the two-state equation and its expansion in
//! Hermite functions of shifted and scaled argument.
//!
//! For U(t) = U₀* z^k dz/dt and δ_t = (δ₁/z + δ₀ + δ₂z) dz/dt the amplitude
//! a₂ = z^{α₁} e^{α₀z + α₂z²/2} H_B(γ, δ, ε; α, q; z) with
//!
//! | | |
//! |---|---|
//! | γ = 2α₁ − iδ₁ − k | δ = 2α₀ − iδ₀, ε = 2α₂ − iδ₂ |
//! | α = α₀(α₀ − iδ₀) + α₁(2α₂ − iδ₂) + α₂(1 − k − iδ₁) + Q″(0)/2 | q = α₀(k + iδ₁) − α₁(2α₀ − iδ₀) − Q′(0) |
//!
//! where Q(z) = U₀*² z^{2k+2} and the exponents solve
//! α₀ε − iα₂δ₀ + Q‴(0)/3! = 0, α₁² − α₁(1 + k + iδ₁) + Q(0) = 0,
//! α₂² − iα₂δ₂ + Q⁽⁴⁾(0)/4! = 0.
//!
//! H_B = Σ cₙ H_{n+γ−α/ε}(s₀(z + δ/ε)), s₀ = ±√(−ε/2), with
//! Rₙcₙ + Q_{n−1}c_{n−1} + P_{n−2}c_{n−2} = 0 and
//! Rₙ = √2/√(−ε)·n(−α + (γ+n)ε), Qₙ = ∓(q + (γ+n)δ), Pₙ = (γ+n)ε/√(−2ε).

use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::{AlphaBranch, Sign};
use crate::field::FieldConfig;
use crate::specfun::{hermite_h, EvalPolicy};
use crate::{ModelError, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const TERMINATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassIndex {
    MinusOne,
    MinusHalf,
    Zero,
    Half,
    One,
}

impl ClassIndex {
    pub const ALL: [ClassIndex; 5] = [
        ClassIndex::MinusOne,
        ClassIndex::MinusHalf,
        ClassIndex::Zero,
        ClassIndex::Half,
        ClassIndex::One,
    ];

    pub fn value(self) -> f64 {
        match self {
            ClassIndex::MinusOne => -1.0,
            ClassIndex::MinusHalf => -0.5,
            ClassIndex::Zero => 0.0,
            ClassIndex::Half => 0.5,
            ClassIndex::One => 1.0,
        }
    }
}

/// Class index and the complex field constants U₀*, δ₀, δ₁, δ₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassConfig {
    pub k: ClassIndex,
    pub u0_star: Complex64,
    pub d0: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl ClassConfig {
    /// m-th derivative of Q(z) = U₀*² z^{2k+2} at the origin.
    pub fn q_derivative_at_zero(&self, m: u32) -> Complex64 {
        let p = 2.0 * self.k.value() + 2.0;
        if p == m as f64 {
            let factorial: f64 = (1..=m).map(f64::from).product();
            self.u0_star * self.u0_star * factorial
        } else {
            ZERO
        }
    }
}

/// k = 1 class reproducing the field (U₀, Δ₀, Δ₁) with z = √t:
/// U₀* = 2U₀, δ₀ = 2Δ₁, δ₁ = 0, δ₂ = 2Δ₀.
pub fn model_class_config(cfg: &FieldConfig) -> ClassConfig {
    ClassConfig {
        k: ClassIndex::One,
        u0_star: Complex64::new(2.0 * cfg.u0(), 0.0),
        d0: Complex64::new(2.0 * cfg.delta1(), 0.0),
        d1: ZERO,
        d2: Complex64::new(2.0 * cfg.delta0(), 0.0),
    }
}

/// Inverse of [`model_class_config`]; needs k = 1, δ₁ = 0 and real constants.
pub fn derive_field_config(cc: &ClassConfig) -> Result<FieldConfig> {
    if cc.k != ClassIndex::One {
        return Err(ModelError::UnsupportedClass { k: cc.k.value() });
    }
    if cc.d1 != ZERO || cc.u0_star.im != 0.0 || cc.d0.im != 0.0 || cc.d2.im != 0.0 {
        return Err(ModelError::InvalidConfig(
            "the inverse-square-root model needs delta1 = 0 and real U0*, delta0, delta2".into(),
        ));
    }
    FieldConfig::new(cc.u0_star.re / 2.0, cc.d2.re / 2.0, cc.d0.re / 2.0)
}

/// U(t) and δ_t(t) of a class with the substitution z = √t.
pub fn class_field_at(cc: &ClassConfig, t: f64) -> Result<(Complex64, Complex64)> {
    if !(t > 0.0) {
        return Err(ModelError::Domain(format!("class field needs t > 0, got {t}")));
    }
    let z = t.sqrt();
    let dz = 0.5 / z;
    let u = cc.u0_star * z.powf(cc.k.value()) * dz;
    let detuning = (cc.d1 / z + cc.d0 + cc.d2 * z) * dz;
    Ok((u, detuning))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiconfluentParams {
    pub gamma: Complex64,
    pub delta: Complex64,
    pub epsilon: Complex64,
    pub alpha: Complex64,
    pub q: Complex64,
    pub alpha0: Complex64,
    pub alpha1: Complex64,
    pub alpha2: Complex64,
}

/// Both roots of α₁² − α₁(1 + k + iδ₁) + Q(0) = 0, the one vanishing with Q(0) first.
pub fn alpha1_roots(cc: &ClassConfig) -> [Complex64; 2] {
    let b = 1.0 + cc.k.value() + I * cc.d1;
    let q0 = cc.q_derivative_at_zero(0);
    let mut root = (b * b - 4.0 * q0).sqrt();
    if (b + root).norm() < (b - root).norm() {
        root = -root;
    }
    let large = (b + root) / 2.0;
    let small = if large == ZERO { ZERO } else { q0 / large };
    [small, large]
}

/// Bi-confluent Heun parameters of the k = 1 class, with the α₁ root that
/// vanishes when Q(0) = 0 and the α₂ root selected by `branch`.
pub fn biconfluent_params(cc: &ClassConfig, branch: AlphaBranch) -> Result<BiconfluentParams> {
    if cc.k != ClassIndex::One {
        return Err(ModelError::UnsupportedClass { k: cc.k.value() });
    }
    let k = cc.k.value();
    let q4 = cc.q_derivative_at_zero(4);
    let sign = match branch {
        AlphaBranch::Minus => -1.0,
        AlphaBranch::Plus => 1.0,
    };
    let disc = -cc.d2 * cc.d2 - 4.0 * q4 / 24.0;
    // −0 imaginary parts would select the other side of the branch cut
    let disc = Complex64::new(disc.re, disc.im + 0.0);
    let alpha2 = (I * cc.d2 + sign * disc.sqrt()) / 2.0;
    let alpha1 = alpha1_roots(cc)[0];
    let epsilon = 2.0 * alpha2 - I * cc.d2;
    if epsilon == ZERO {
        return Err(ModelError::Domain(
            "epsilon vanishes; the Hermite expansion needs epsilon != 0".into(),
        ));
    }
    let alpha0 = (I * alpha2 * cc.d0 - cc.q_derivative_at_zero(3) / 6.0) / epsilon;
    let gamma = 2.0 * alpha1 - I * cc.d1 - k;
    let delta = 2.0 * alpha0 - I * cc.d0;
    let alpha = alpha0 * (alpha0 - I * cc.d0)
        + alpha1 * (2.0 * alpha2 - I * cc.d2)
        + alpha2 * (1.0 - k - I * cc.d1)
        + cc.q_derivative_at_zero(2) / 2.0;
    let q = alpha0 * (k + I * cc.d1) - alpha1 * (2.0 * alpha0 - I * cc.d0) - cc.q_derivative_at_zero(1);
    Ok(BiconfluentParams {
        gamma,
        delta,
        epsilon,
        alpha,
        q,
        alpha0,
        alpha1,
        alpha2,
    })
}

/// Coefficients of the Hermite-function expansion of H_B.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermiteSeries {
    pub coefficients: Vec<Complex64>,
    pub s0_sign: Sign,
    /// s₀ = ±√(−ε/2)
    pub scale: Complex64,
    /// δ/ε
    pub shift: Complex64,
    /// Order of the n = 0 term, γ − α/ε; term n has order n + γ − α/ε.
    pub order_base: Complex64,
}

/// Recurrence coefficients (Rₙ, Qₙ, Pₙ) for the choice of s₀.
pub fn recurrence_coefficients(bp: &BiconfluentParams, s0_sign: Sign, n: usize) -> (Complex64, Complex64, Complex64) {
    let nf = n as f64;
    let eps = bp.epsilon;
    let r = 2f64.sqrt() / (-eps).sqrt() * nf * (-bp.alpha + (bp.gamma + nf) * eps);
    let q = -s0_sign.value() * (bp.q + (bp.gamma + nf) * bp.delta);
    let p = (bp.gamma + nf) * eps / (-2.0 * eps).sqrt();
    (r, q, p)
}

/// c₀ = 1, c₁ from R₁c₁ + Q₀c₀ = 0, then the three-term recurrence up to n_max.
pub fn hermite_series_coeffs(bp: &BiconfluentParams, s0_sign: Sign, n_max: usize) -> Result<HermiteSeries> {
    if bp.epsilon == ZERO {
        return Err(ModelError::Domain(
            "epsilon vanishes; the Hermite expansion needs epsilon != 0".into(),
        ));
    }
    if n_max < 2 {
        return Err(ModelError::Domain(format!("n_max must be at least 2, got {n_max}")));
    }
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for n in 1..=n_max {
        let (r_n, _, _) = recurrence_coefficients(bp, s0_sign, n);
        let (_, q_prev, _) = recurrence_coefficients(bp, s0_sign, n - 1);
        let mut rhs = -q_prev * c[n - 1];
        if n >= 2 {
            let (_, _, p_prev2) = recurrence_coefficients(bp, s0_sign, n - 2);
            rhs -= p_prev2 * c[n - 2];
        }
        let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if r_n.norm() <= TERMINATION_TOL * (bp.alpha.norm() + bp.epsilon.norm()) {
            if rhs.norm() <= TERMINATION_TOL * scale * (q_prev.norm() + 1.0) {
                c.push(ZERO);
                continue;
            }
            return Err(ModelError::DegenerateRecurrence { n });
        }
        c.push(rhs / r_n);
    }
    let s = s0_sign.value() * (-bp.epsilon / 2.0).sqrt();
    Ok(HermiteSeries {
        coefficients: c,
        s0_sign,
        scale: s,
        shift: bp.delta / bp.epsilon,
        order_base: bp.gamma - bp.alpha / bp.epsilon,
    })
}

/// Largest |Rₙcₙ + Q_{n−1}c_{n−1} + P_{n−2}c_{n−2}| over the series, relative
/// to the size of the individual terms.
pub fn recurrence_residual(series: &HermiteSeries, bp: &BiconfluentParams) -> f64 {
    let c = &series.coefficients;
    let mut worst: f64 = 0.0;
    for n in 1..c.len() {
        let (r_n, _, _) = recurrence_coefficients(bp, series.s0_sign, n);
        let (_, q_prev, _) = recurrence_coefficients(bp, series.s0_sign, n - 1);
        let mut terms = [r_n * c[n], q_prev * c[n - 1], ZERO];
        if n >= 2 {
            terms[2] = recurrence_coefficients(bp, series.s0_sign, n - 2).2 * c[n - 2];
        }
        let sum: Complex64 = terms.iter().sum();
        let size: f64 = terms.iter().map(|x| x.norm()).sum();
        if size > 0.0 {
            worst = worst.max(sum.norm() / size);
        }
    }
    worst
}

/// γ = −N together with the accessory-parameter condition for termination
/// after the N-th term: q = 0 for N = 0, q² − δq + α = 0 for N = 1, and
/// c_{N+1} = 0 from the recurrence for larger N.
pub fn termination_check(bp: &BiconfluentParams, n: usize) -> bool {
    let target = -(n as f64);
    if (bp.gamma - target).norm() > TERMINATION_TOL * (1.0 + target.abs()) {
        return false;
    }
    match n {
        0 => bp.q.norm() <= TERMINATION_TOL * (bp.delta.norm() + bp.alpha.norm()).max(1.0),
        1 => {
            let value = bp.q * bp.q - bp.delta * bp.q + bp.alpha;
            let size = bp.q.norm_sqr() + (bp.delta * bp.q).norm() + bp.alpha.norm();
            value.norm() <= TERMINATION_TOL * size.max(f64::MIN_POSITIVE)
        }
        _ => match hermite_series_coeffs(bp, Sign::Plus, n + 2) {
            Ok(series) => {
                let c = &series.coefficients;
                let scale = c[..=n].iter().map(|x| x.norm()).fold(0.0, f64::max);
                c[n + 1].norm() <= TERMINATION_TOL * scale
            }
            Err(_) => false,
        },
    }
}

/// Left minus right side of (γ + k + iδ₁)(γ − k − 2 − iδ₁) = −4Q(0), the
/// relation left after eliminating α₁ between γ = 2α₁ − iδ₁ − k and the α₁
/// quadratic.
pub fn eq61_residual(cc: &ClassConfig, gamma: Complex64) -> Complex64 {
    let k = cc.k.value();
    let id1 = I * cc.d1;
    (gamma + k + id1) * (gamma - k - 2.0 - id1) + 4.0 * cc.q_derivative_at_zero(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExactCase {
    /// γ = k = 0: the equation reduces to the confluent hypergeometric one.
    ConfluentHypergeometric,
    /// γ = −1, k = 1: the inverse-square-root model.
    InverseSqrtModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Solvability {
    ExactlySolvable(ExactCase),
    /// Termination ties δ₁ to U₀*; `residual` is the mismatch of that relation
    /// for the given constants.
    ConditionallyIntegrable {
        residual: Complex64,
    },
    /// γ is not a non-positive integer, so the series cannot terminate.
    NonTerminating,
}

pub fn exact_solvability_check(cc: &ClassConfig, gamma: Complex64) -> Solvability {
    let is_nonpositive_integer = gamma.im == 0.0 && gamma.re <= 0.0 && gamma.re.fract() == 0.0;
    if !is_nonpositive_integer {
        return Solvability::NonTerminating;
    }
    let k = cc.k.value();
    let both_sides_vanish = cc.k != ClassIndex::MinusOne && cc.d1 == ZERO;
    if both_sides_vanish && (gamma.re + k) * (gamma.re - k - 2.0) == 0.0 {
        if gamma.re == 0.0 && cc.k == ClassIndex::Zero {
            return Solvability::ExactlySolvable(ExactCase::ConfluentHypergeometric);
        }
        if gamma.re == -1.0 && cc.k == ClassIndex::One {
            return Solvability::ExactlySolvable(ExactCase::InverseSqrtModel);
        }
    }
    Solvability::ConditionallyIntegrable {
        residual: eq61_residual(cc, gamma),
    }
}

/// H_B(z) = Σ cₙ H_{n+γ−α/ε}(s₀(z + δ/ε)). Trailing zero coefficients are
/// skipped; a non-terminating series is accepted only if its last term is
/// below `policy.rel_tol` of the sum.
pub fn hb_series_eval(series: &HermiteSeries, z: Complex64, policy: &EvalPolicy) -> Result<Complex64> {
    let x = series.scale * (z + series.shift);
    let c = &series.coefficients;
    let len = c.iter().rposition(|x| *x != ZERO).map_or(0, |i| i + 1);
    let mut sum = ZERO;
    let mut last = ZERO;
    for (n, cn) in c[..len].iter().enumerate() {
        last = cn * hermite_h(series.order_base + n as f64, x, policy)?;
        sum += last;
    }
    let terminated = len < c.len();
    if !terminated && last.norm() > policy.rel_tol * sum.norm() {
        return Err(ModelError::Truncation { tail: last.norm() });
    }
    Ok(sum)
}

/// a₂ = z^{α₁} e^{α₀z + α₂z²/2} H_B(z).
pub fn a2_from_series(
    series: &HermiteSeries,
    bp: &BiconfluentParams,
    z: Complex64,
    policy: &EvalPolicy,
) -> Result<Complex64> {
    let power = if bp.alpha1 == ZERO {
        Complex64::new(1.0, 0.0)
    } else {
        z.powc(bp.alpha1)
    };
    Ok(power * (bp.alpha0 * z + bp.alpha2 * z * z / 2.0).exp() * hb_series_eval(series, z, policy)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fig1() -> FieldConfig {
        FieldConfig::new(1.0, 4.0, -5.0).unwrap()
    }

    #[test]
    fn q_derivatives() {
        let cc = model_class_config(&fig1());
        for m in 0..4 {
            assert_eq!(cc.q_derivative_at_zero(m), ZERO);
        }
        assert_eq!(cc.q_derivative_at_zero(4), c(24.0 * 4.0, 0.0));
        let k_minus_one = ClassConfig {
            k: ClassIndex::MinusOne,
            ..cc
        };
        assert_eq!(k_minus_one.q_derivative_at_zero(0), c(4.0, 0.0));
    }

    #[test]
    fn model_parameters() {
        let cc = model_class_config(&fig1());
        let bp = biconfluent_params(&cc, AlphaBranch::Minus).unwrap();
        assert_eq!(bp.gamma, c(-1.0, 0.0));
        assert_eq!(bp.alpha1, ZERO);
        assert!((bp.q - bp.alpha0).norm() < 1e-15);
        let res = bp.alpha2 * bp.alpha2 - I * bp.alpha2 * cc.d2 + cc.q_derivative_at_zero(4) / 24.0;
        assert!(res.norm() < 1e-12);
        assert_eq!(alpha1_roots(&cc), [ZERO, c(2.0, 0.0)]);
    }

    #[test]
    fn unsupported_class() {
        let cc = ClassConfig {
            k: ClassIndex::Half,
            ..model_class_config(&fig1())
        };
        assert!(matches!(
            biconfluent_params(&cc, AlphaBranch::Minus),
            Err(ModelError::UnsupportedClass { .. })
        ));
        assert!(derive_field_config(&cc).is_err());
    }

    #[test]
    fn terminates_after_two_terms() {
        let cc = model_class_config(&fig1());
        let bp = biconfluent_params(&cc, AlphaBranch::Minus).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            let s = hermite_series_coeffs(&bp, sign, 6).unwrap();
            let head = s.coefficients[0].norm().max(s.coefficients[1].norm());
            for cn in &s.coefficients[2..] {
                assert!(cn.norm() <= 1e-12 * head);
            }
            assert!(recurrence_residual(&s, &bp) < 1e-13);
        }
        assert!(termination_check(&bp, 1));
        assert!(!termination_check(&bp, 0));
        let perturbed = BiconfluentParams { q: bp.q + 0.1, ..bp };
        assert!(!termination_check(&perturbed, 1));
        let s = hermite_series_coeffs(&perturbed, Sign::Plus, 4).unwrap();
        assert!(s.coefficients[2].norm() > 1e-3);
    }

    #[test]
    fn gamma_zero_q_zero_truncates_at_one_term() {
        let bp = BiconfluentParams {
            gamma: ZERO,
            delta: c(0.3, -1.0),
            epsilon: c(0.0, 2.0),
            alpha: c(0.7, 0.2),
            q: ZERO,
            alpha0: ZERO,
            alpha1: ZERO,
            alpha2: ZERO,
        };
        let s = hermite_series_coeffs(&bp, Sign::Plus, 5).unwrap();
        assert!(s.coefficients[1..].iter().all(|x| x.norm() < 1e-15));
        assert!(termination_check(&bp, 0));
    }

    #[test]
    fn higher_termination_uses_recurrence() {
        // γ = −2 with c₃ = 0 requires a root of a quadratic in q; a random q is not one.
        let bp = BiconfluentParams {
            gamma: c(-2.0, 0.0),
            delta: c(0.3, -1.0),
            epsilon: c(0.0, 2.0),
            alpha: c(0.7, 0.2),
            q: c(0.4, 0.1),
            alpha0: ZERO,
            alpha1: ZERO,
            alpha2: ZERO,
        };
        assert!(!termination_check(&bp, 2));
        assert!(!termination_check(&bp, 1));
    }

    #[test]
    fn solvability_classes() {
        let cc = model_class_config(&fig1());
        assert_eq!(
            exact_solvability_check(&cc, c(-1.0, 0.0)),
            Solvability::ExactlySolvable(ExactCase::InverseSqrtModel)
        );
        let k0 = ClassConfig {
            k: ClassIndex::Zero,
            ..cc
        };
        assert_eq!(
            exact_solvability_check(&k0, ZERO),
            Solvability::ExactlySolvable(ExactCase::ConfluentHypergeometric)
        );
        let dissipative = ClassConfig {
            d1: c(0.5, 0.0) * I,
            ..cc
        };
        assert!(matches!(
            exact_solvability_check(&dissipative, c(-1.0, 0.0)),
            Solvability::ConditionallyIntegrable { .. }
        ));
        assert_eq!(exact_solvability_check(&cc, c(-0.5, 0.0)), Solvability::NonTerminating);
        let k_minus_one = ClassConfig {
            k: ClassIndex::MinusOne,
            ..cc
        };
        assert!(matches!(
            exact_solvability_check(&k_minus_one, c(-1.0, 0.0)),
            Solvability::ConditionallyIntegrable { .. }
        ));
    }

    #[test]
    fn round_trip_and_field() {
        let cfg = fig1();
        let cc = model_class_config(&cfg);
        assert_eq!(derive_field_config(&cc).unwrap(), cfg);
        for t in [0.3, 1.5625, 7.0] {
            let (u, det) = class_field_at(&cc, t).unwrap();
            assert!((u - c(1.0, 0.0)).norm() < 1e-15);
            let expected = crate::field::detuning(t, &cfg).unwrap();
            assert!((det - c(expected, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn non_terminating_series_is_refused_when_tail_is_large() {
        let cc = model_class_config(&fig1());
        let bp = biconfluent_params(&cc, AlphaBranch::Minus).unwrap();
        let perturbed = BiconfluentParams { q: bp.q + 0.1, ..bp };
        let s = hermite_series_coeffs(&perturbed, Sign::Plus, 3).unwrap();
        let p = EvalPolicy::default();
        assert!(matches!(
            hb_series_eval(&s, c(1.0, 0.0), &p),
            Err(ModelError::Truncation { .. })
        ));
    }
    #[test]
    fn series_reproduces_fundamental_solution() {
        use crate::closed_form::{a2_fundamental_hermite, fundamental_params_with};
        let p = EvalPolicy::default();
        for cfg in [fig1(), FieldConfig::new(0.7, 2.0, 1.3).unwrap()] {
            let cc = model_class_config(&cfg);
            for branch in [AlphaBranch::Minus, AlphaBranch::Plus] {
                let bp = biconfluent_params(&cc, branch).unwrap();
                for sign in [Sign::Plus, Sign::Minus] {
                    let series = hermite_series_coeffs(&bp, sign, 4).unwrap();
                    let fp = fundamental_params_with(&cfg, sign, branch).unwrap();
                    for t in [0.0f64, 0.4, 1.0, 2.5, 6.0] {
                        let z = c(t.sqrt(), 0.0);
                        let lhs = a2_from_series(&series, &bp, z, &p).unwrap();
                        let rhs = a2_fundamental_hermite(t, &fp, &p).unwrap();
                        assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0), "{t} {lhs} {rhs}");
                    }
                }
            }
        }
    }
}
