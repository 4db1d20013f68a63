use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::fundamental::{a2_fundamental_quasienergy, QuasiBranch};
use crate::field::{c1_normalization, dimensionless_params, quasi_energies, scattering_root_sign, FieldConfig};
use crate::specfun::{erfc_complex, hermite_h, recip_gamma, EvalPolicy};
use crate::Result;

/// Amplitude of the second state at t = 0 for the state that ends up on the
/// λ₁ branch with unit norm, together with both populations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringAtZero {
    pub a2: Complex64,
    /// 1 − |a₂(0)|²
    pub p1: f64,
    /// |a₂(0)|²
    pub p2: f64,
}

/// a₂(0) = C₁(H_ν(ξ) + (−ξ + √(ξ² − 2ν))H_{ν−1}(ξ)).
///
/// The root is the principal one times −sgn Δ₁ (see
/// [`scattering_root_sign`]); ξ² − 2ν = −2i(ν₀ + ξ₀²) lies on the negative
/// imaginary axis for every configuration.
pub fn scattering_a2_at_zero(cfg: &FieldConfig, policy: &EvalPolicy) -> Result<ScatteringAtZero> {
    let c1 = c1_normalization(cfg)?;
    let d = dimensionless_params(cfg);
    let (nu, xi) = (d.nu, d.xi);
    let root = scattering_root_sign(cfg) * (xi * xi - 2.0 * nu).sqrt();
    let a2 = c1 * (hermite_h(nu, xi, policy)? + (root - xi) * hermite_h(nu - 1.0, xi, policy)?);
    let p2 = a2.norm_sqr();
    Ok(ScatteringAtZero { a2, p1: 1.0 - p2, p2 })
}

/// Small-U₀ form a₂(0) ≈ C₁(1 + (√π/2)(√(ξ²) − ξ)e^{ξ²}erfc ξ), principal root.
pub fn approx_weak_field(cfg: &FieldConfig) -> Result<Complex64> {
    let c1 = c1_normalization(cfg)?;
    let xi = dimensionless_params(cfg).xi;
    let x2 = xi * xi;
    Ok(c1 * (1.0 + 0.5 * PI.sqrt() * (x2.sqrt() - xi) * x2.exp() * erfc_complex(xi)))
}

/// Large-U₀ form a₂(0) ≈ C₁√π 2^ν (√(−ν)/(√2 Γ(1 − ν/2)) + 1/Γ((1 − ν)/2)).
pub fn approx_strong_field(cfg: &FieldConfig) -> Result<Complex64> {
    let c1 = c1_normalization(cfg)?;
    let nu = dimensionless_params(cfg).nu;
    let two_nu = (nu * std::f64::consts::LN_2).exp();
    let bracket = (-nu).sqrt() / 2f64.sqrt() * recip_gamma(1.0 - nu / 2.0) + recip_gamma((1.0 - nu) / 2.0);
    Ok(c1 * PI.sqrt() * two_nu * bracket)
}

/// Exponent of the modulus prefactor used for the λ₂ asymptote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Lambda2Prefactor {
    /// e^{πν₀/4} = exp(πΔ₁²U₀²/(16R³)), the same as on the λ₁ branch.
    QuarterPiNu0,
    /// e^{πν₀} = exp(4πΔ₁²U₀²/(16R³)).
    PiNu0,
}

/// Leading large-t form of the λ₁-branch fundamental solution:
/// e^{πν₀/4} exp(i(λ₁t + Δ₁λ₁√t/R + Δ₁²U₀²/(8R³)·ln(8Rt))).
pub fn lambda1_asymptote(t: f64, cfg: &FieldConfig) -> Complex64 {
    let q = quasi_energies(cfg);
    let (u0, d1, r) = (cfg.u0(), cfg.delta1(), q.r);
    let nu0 = dimensionless_params(cfg).nu0;
    let ph = q.lambda1 * t + d1 * q.lambda1 / r * t.sqrt() + (d1 * u0).powi(2) / (8.0 * r.powi(3)) * (8.0 * r * t).ln();
    Complex64::from_polar((PI * nu0 / 4.0).exp(), ph)
}

/// Leading large-t form of the λ₂-branch fundamental solution:
/// P exp(i(λ₂t − Δ₁λ₂√t/R − Δ₁²U₀²/(8R³)·ln(2Rt))).
pub fn lambda2_asymptote(t: f64, cfg: &FieldConfig, prefactor: Lambda2Prefactor) -> Complex64 {
    let q = quasi_energies(cfg);
    let (u0, d1, r) = (cfg.u0(), cfg.delta1(), q.r);
    let nu0 = dimensionless_params(cfg).nu0;
    let modulus = match prefactor {
        Lambda2Prefactor::QuarterPiNu0 => (PI * nu0 / 4.0).exp(),
        Lambda2Prefactor::PiNu0 => (PI * nu0).exp(),
    };
    let ph = q.lambda2 * t - d1 * q.lambda2 / r * t.sqrt() - (d1 * u0).powi(2) / (8.0 * r.powi(3)) * (2.0 * r * t).ln();
    Complex64::from_polar(modulus, ph)
}

/// Fundamental solution on `branch` divided by its leading asymptote.
pub fn asymptote_remainder(
    t: f64,
    cfg: &FieldConfig,
    branch: QuasiBranch,
    prefactor: Lambda2Prefactor,
    policy: &EvalPolicy,
) -> Result<Complex64> {
    let value = a2_fundamental_quasienergy(t, cfg, branch, policy)?;
    Ok(match branch {
        QuasiBranch::Lambda1 => value / lambda1_asymptote(t, cfg),
        QuasiBranch::Lambda2 => value / lambda2_asymptote(t, cfg, prefactor),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fig1_scattering_amplitude() {
        let p = EvalPolicy::default();
        let cfg = FieldConfig::new(1.0, 4.0, -5.0).unwrap();
        let s = scattering_a2_at_zero(&cfg, &p).unwrap();
        // mpmath evaluation of the same closed form at 30 digits
        assert!((s.a2 - c(0.929_911_76, 0.321_490_09)).norm() < 1e-7);
        assert!((s.p1 + s.p2 - 1.0).abs() < 1e-15);
        // same value from the λ₁ fundamental solution at t = 0
        let direct =
            c1_normalization(&cfg).unwrap() * a2_fundamental_quasienergy(0.0, &cfg, QuasiBranch::Lambda1, &p).unwrap();
        assert!((direct - s.a2).norm() < 1e-12);
    }

    #[test]
    fn positive_delta1_uses_signed_root() {
        let p = EvalPolicy::default();
        let cfg = FieldConfig::new(1.0, 4.0, 5.0).unwrap();
        let s = scattering_a2_at_zero(&cfg, &p).unwrap();
        let direct =
            c1_normalization(&cfg).unwrap() * a2_fundamental_quasienergy(0.0, &cfg, QuasiBranch::Lambda1, &p).unwrap();
        assert!((direct - s.a2).norm() < 1e-12);
        assert!((s.a2 - c(-0.010_77, 0.015_66)).norm() < 1e-4);
    }

    #[test]
    fn weak_field_degenerates_for_positive_delta1() {
        let cfg = FieldConfig::new(0.3, 4.0, 2.0).unwrap();
        let weak = approx_weak_field(&cfg).unwrap();
        let c1 = c1_normalization(&cfg).unwrap();
        assert!((weak - c1).norm() < 1e-15);
    }

    #[test]
    fn strong_field_nu_to_zero() {
        // ν → 0 at Δ₁ = 0: C₁√π(0 + 1/Γ(1/2)) = C₁
        let cfg = FieldConfig::new(3.0, 4.0, 0.0).unwrap();
        let strong = approx_strong_field(&cfg).unwrap();
        let c1 = c1_normalization(&cfg).unwrap();
        assert!((strong - c1).norm() < 1e-14);
    }

    #[test]
    fn negative_delta0_is_rejected() {
        let p = EvalPolicy::default();
        let cfg = FieldConfig::new(1.0, -4.0, 5.0).unwrap();
        assert!(scattering_a2_at_zero(&cfg, &p).is_err());
        assert!(approx_weak_field(&cfg).is_err());
        assert!(approx_strong_field(&cfg).is_err());
    }
}
