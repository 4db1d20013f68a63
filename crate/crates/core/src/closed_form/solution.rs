use num_complex::Complex64;
use serde::Serialize;

use super::fundamental::{a2_fundamental_quasienergy_jet, QuasiBranch, TimeJet};
use crate::field::{phase, quasi_energies, FieldConfig};
use crate::specfun::EvalPolicy;
use crate::{ModelError, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const MAX_CONDITION: f64 = 1e12;
const NORM_TOL: f64 = 1e-10;

/// Probability amplitudes of the two states at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudePair {
    pub a1: Complex64,
    pub a2: Complex64,
}

impl AmplitudePair {
    pub fn new(a1: Complex64, a2: Complex64) -> Self {
        Self { a1, a2 }
    }

    /// |a₁|² + |a₂|²
    pub fn norm_sqr(&self) -> f64 {
        self.a1.norm_sqr() + self.a2.norm_sqr()
    }

    pub fn p1(&self) -> f64 {
        self.a1.norm_sqr()
    }

    pub fn p2(&self) -> f64 {
        self.a2.norm_sqr()
    }
}

impl std::ops::Add for AmplitudePair {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a1 + rhs.a1, self.a2 + rhs.a2)
    }
}

/// Weights of the λ₁- and λ₂-branch fundamental solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolutionCoefficients {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl SolutionCoefficients {
    pub fn new(c1: Complex64, c2: Complex64) -> Self {
        Self { c1, c2 }
    }
}

/// a₂ and its t-derivatives for the general solution C₁a₂F|λ₁ + C₂a₂F|λ₂.
/// At Δ₁ = 0 the Rabi exponentials e^{iλt} are used.
pub fn a2_general_jet(
    t: f64,
    coeffs: &SolutionCoefficients,
    cfg: &FieldConfig,
    policy: &EvalPolicy,
) -> Result<TimeJet> {
    let (f1, f2) = branch_jets(t, cfg, policy)?;
    Ok(combine(coeffs, &f1, &f2))
}

pub fn a2_general(t: f64, coeffs: &SolutionCoefficients, cfg: &FieldConfig, policy: &EvalPolicy) -> Result<Complex64> {
    Ok(a2_general_jet(t, coeffs, cfg, policy)?.value)
}

fn combine(c: &SolutionCoefficients, f1: &TimeJet, f2: &TimeJet) -> TimeJet {
    TimeJet {
        value: c.c1 * f1.value + c.c2 * f2.value,
        d1: c.c1 * f1.d1 + c.c2 * f2.d1,
        d2: f1.d2.zip(f2.d2).map(|(a, b)| c.c1 * a + c.c2 * b),
    }
}

fn branch_jets(t: f64, cfg: &FieldConfig, policy: &EvalPolicy) -> Result<(TimeJet, TimeJet)> {
    if cfg.delta1() == 0.0 {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(ModelError::Domain(format!(
                "closed-form solutions need t >= 0, got {t}"
            )));
        }
        let q = quasi_energies(cfg);
        let jet = |lambda: f64| {
            let e = Complex64::from_polar(1.0, lambda * t);
            TimeJet {
                value: e,
                d1: I * lambda * e,
                d2: Some(-lambda * lambda * e),
            }
        };
        return Ok((jet(q.lambda1), jet(q.lambda2)));
    }
    Ok((
        a2_fundamental_quasienergy_jet(t, cfg, QuasiBranch::Lambda1, policy)?,
        a2_fundamental_quasienergy_jet(t, cfg, QuasiBranch::Lambda2, policy)?,
    ))
}

/// a₁ = i·a₂′/(U₀e^{iδ(t)}) for t > 0.
pub fn a1_from_a2(t: f64, a2_deriv: Complex64, cfg: &FieldConfig) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(ModelError::Domain(format!(
            "a1_from_a2 needs t > 0, got {t}; use limit_a1_at_zero"
        )));
    }
    Ok(I * a2_deriv * Complex64::from_polar(1.0, -phase(t, cfg)?) / cfg.u0())
}

/// a₁(0) = i·a₂′(0)/U₀, where a₂′(0) is the finite limit of the analytic
/// derivative (the 1/√t terms cancel for every solution).
pub fn limit_a1_at_zero(a2_deriv_at_zero: Complex64, cfg: &FieldConfig) -> Complex64 {
    I * a2_deriv_at_zero / cfg.u0()
}

fn amplitudes_from_jet(t: f64, jet: &TimeJet, cfg: &FieldConfig) -> Result<AmplitudePair> {
    let a1 = if t == 0.0 {
        limit_a1_at_zero(jet.d1, cfg)
    } else {
        a1_from_a2(t, jet.d1, cfg)?
    };
    Ok(AmplitudePair::new(a1, jet.value))
}

/// Weights (C₁, C₂) reproducing `initial` at t = 0.
pub fn solve_ivp_coefficients(
    initial: &AmplitudePair,
    cfg: &FieldConfig,
    policy: &EvalPolicy,
) -> Result<SolutionCoefficients> {
    let norm = initial.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(ModelError::Domain(format!(
            "initial amplitudes must be normalized, |a1|^2 + |a2|^2 = {norm}"
        )));
    }
    solve_ivp_coefficients_unnormalized(initial, cfg, policy)
}

/// As [`solve_ivp_coefficients`] without the normalization precondition.
pub fn solve_ivp_coefficients_unnormalized(
    initial: &AmplitudePair,
    cfg: &FieldConfig,
    policy: &EvalPolicy,
) -> Result<SolutionCoefficients> {
    let (f1, f2) = branch_jets(0.0, cfg, policy)?;
    let m = [
        [f1.value, f2.value],
        [limit_a1_at_zero(f1.d1, cfg), limit_a1_at_zero(f2.d1, cfg)],
    ];
    let condition = condition_number(&m);
    if !(condition <= MAX_CONDITION) {
        return Err(ModelError::SingularMatch { condition });
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    Ok(SolutionCoefficients {
        c1: (initial.a2 * m[1][1] - m[0][1] * initial.a1) / det,
        c2: (m[0][0] * initial.a1 - m[1][0] * initial.a2) / det,
    })
}

/// 2-norm condition number of a complex 2×2 matrix.
fn condition_number(m: &[[Complex64; 2]; 2]) -> f64 {
    let fro2: f64 = m.iter().flatten().map(|x| x.norm_sqr()).sum();
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
    // σ₁² + σ₂² = ‖M‖_F², σ₁σ₂ = |det M|
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let s1 = ((fro2 + disc) / 2.0).sqrt();
    if det == 0.0 {
        return f64::INFINITY;
    }
    let s2 = det / s1;
    s1 / s2
}

/// A closed-form trajectory fixed by its weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticSolution {
    pub cfg: FieldConfig,
    pub coeffs: SolutionCoefficients,
    pub policy: EvalPolicy,
}

impl AnalyticSolution {
    pub fn from_initial(initial: &AmplitudePair, cfg: &FieldConfig, policy: &EvalPolicy) -> Result<Self> {
        Ok(Self {
            cfg: *cfg,
            coeffs: solve_ivp_coefficients(initial, cfg, policy)?,
            policy: *policy,
        })
    }

    pub fn at(&self, t: f64) -> Result<AmplitudePair> {
        let jet = a2_general_jet(t, &self.coeffs, &self.cfg, &self.policy)?;
        amplitudes_from_jet(t, &jet, &self.cfg)
    }

    pub fn jet(&self, t: f64) -> Result<TimeJet> {
        a2_general_jet(t, &self.coeffs, &self.cfg, &self.policy)
    }

    pub fn trajectory(&self, times: &[f64]) -> Result<Vec<AmplitudePair>> {
        times.iter().map(|&t| self.at(t)).collect()
    }
}

/// Constant-field solution a₂ = C₁e^{iλ₁t} + C₂e^{iλ₂t},
/// a₁ = −C₁(λ₁/U₀)e^{i(λ₁−Δ₀)t} − C₂(λ₂/U₀)e^{i(λ₂−Δ₀)t}.
pub fn rabi_solution(t: f64, coeffs: &SolutionCoefficients, u0: f64, delta0: f64) -> AmplitudePair {
    let r = (0.25 * delta0 * delta0 + u0 * u0).sqrt();
    let (l1, l2) = (0.5 * delta0 + r, 0.5 * delta0 - r);
    let e = |x: f64| Complex64::from_polar(1.0, x * t);
    AmplitudePair {
        a2: coeffs.c1 * e(l1) + coeffs.c2 * e(l2),
        a1: -coeffs.c1 * (l1 / u0) * e(l1 - delta0) - coeffs.c2 * (l2 / u0) * e(l2 - delta0),
    }
}
