//! Field configuration U = U₀, δ_t = Δ₀ + Δ₁/√t and the scalars derived from it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{ModelError, Result};

/// The physical triple (U₀, Δ₀, Δ₁).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldConfig {
    u0: f64,
    delta0: f64,
    delta1: f64,
}

impl FieldConfig {
    /// Requires U₀ > 0 and all values finite.
    pub fn new(u0: f64, delta0: f64, delta1: f64) -> Result<Self> {
        if !(u0.is_finite() && delta0.is_finite() && delta1.is_finite()) {
            return Err(ModelError::InvalidConfig(format!(
                "non-finite parameters (U0, Delta0, Delta1) = ({u0}, {delta0}, {delta1})"
            )));
        }
        if u0 <= 0.0 {
            return Err(ModelError::InvalidConfig(format!("U0 must be positive, got {u0}")));
        }
        Ok(Self { u0, delta0, delta1 })
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    pub fn delta1(&self) -> f64 {
        self.delta1
    }

    /// Rejects Δ₀ ≤ 0, for which the roles of λ₁ and λ₂ are swapped.
    pub fn require_positive_delta0(&self) -> Result<()> {
        if self.delta0 > 0.0 {
            Ok(())
        } else {
            Err(ModelError::Convention(format!(
                "scattering quantities need Delta0 > 0, got {}",
                self.delta0
            )))
        }
    }
}

impl<'de> Deserialize<'de> for FieldConfig {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            u0: f64,
            delta0: f64,
            delta1: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        FieldConfig::new(raw.u0, raw.delta0, raw.delta1).map_err(serde::de::Error::custom)
    }
}

/// δ_t = Δ₀ + Δ₁/√t.
pub fn detuning(t: f64, cfg: &FieldConfig) -> Result<f64> {
    if !(t > 0.0) {
        return Err(ModelError::Domain(format!("detuning needs t > 0, got {t}")));
    }
    Ok(cfg.delta0 + cfg.delta1 / t.sqrt())
}

/// δ(t) = Δ₀t + 2Δ₁√t, the antiderivative of the detuning with δ(0) = 0.
pub fn phase(t: f64, cfg: &FieldConfig) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(ModelError::Domain(format!("phase needs t >= 0, got {t}")));
    }
    Ok(cfg.delta0 * t + 2.0 * cfg.delta1 * t.sqrt())
}

/// t₀ = Δ₁²/Δ₀² when Δ₀Δ₁ < 0; `None` when the detuning never vanishes.
pub fn crossing_time(cfg: &FieldConfig) -> Option<f64> {
    (cfg.delta0 * cfg.delta1 < 0.0).then(|| (cfg.delta1 / cfg.delta0).powi(2))
}

/// Effective Landau-Zener parameter of the crossing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LzParameter {
    /// |Λ| = U₀²Δ₁²/(4|Δ₀|³).
    pub magnitude: f64,
    /// Λ itself is negative (Δ₀ < 0).
    pub negative: bool,
    /// dδ_t/dt at t₀ in absolute value, |Δ₀|³/(2Δ₁²); `None` for Δ₁ = 0.
    pub slope: Option<f64>,
}

impl LzParameter {
    pub fn signed(&self) -> f64 {
        if self.negative {
            -self.magnitude
        } else {
            self.magnitude
        }
    }
}

pub fn lz_parameter(cfg: &FieldConfig) -> Result<LzParameter> {
    if cfg.delta0 == 0.0 {
        return Err(ModelError::Domain("Landau-Zener parameter needs Delta0 != 0".into()));
    }
    let d0 = cfg.delta0.abs();
    Ok(LzParameter {
        magnitude: cfg.u0 * cfg.u0 * cfg.delta1 * cfg.delta1 / (4.0 * d0.powi(3)),
        negative: cfg.delta0 < 0.0,
        slope: (cfg.delta1 != 0.0).then(|| d0.powi(3) / (2.0 * cfg.delta1 * cfg.delta1)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiEnergies {
    pub lambda1: f64,
    pub lambda2: f64,
    pub r: f64,
}

/// λ₁,₂ = Δ₀/2 ± R with R = √(Δ₀²/4 + U₀²).
pub fn quasi_energies(cfg: &FieldConfig) -> QuasiEnergies {
    let half = 0.5 * cfg.delta0;
    let r = half.hypot(cfg.u0);
    // λ₁λ₂ = −U₀² keeps the smaller root accurate when U₀ ≪ |Δ₀|
    let (lambda1, lambda2) = if half >= 0.0 {
        let l1 = half + r;
        (l1, -cfg.u0 * cfg.u0 / l1)
    } else {
        let l2 = half - r;
        (-cfg.u0 * cfg.u0 / l2, l2)
    };
    QuasiEnergies { lambda1, lambda2, r }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionlessParams {
    pub nu0: f64,
    pub xi0: f64,
    pub nu: Complex64,
    pub xi: Complex64,
}

/// ν₀ = U₀²Δ₁²/(4R³), ξ₀ = Δ₀Δ₁/(4R^{3/2}), ν = iν₀, ξ = (1 − i)ξ₀.
pub fn dimensionless_params(cfg: &FieldConfig) -> DimensionlessParams {
    let r = quasi_energies(cfg).r;
    let nu0 = (cfg.u0 * cfg.delta1).powi(2) / (4.0 * r.powi(3));
    let xi0 = cfg.delta0 * cfg.delta1 / (4.0 * r.powf(1.5));
    DimensionlessParams {
        nu0,
        xi0,
        nu: Complex64::new(0.0, nu0),
        xi: Complex64::new(xi0, -xi0),
    }
}

/// Sign taken by √(ν₀ + ξ₀²) (equivalently by √(ξ² − 2ν)/(1 − i)) in the
/// dimensionless forms of the scattering amplitude: −sgn Δ₁.
pub fn scattering_root_sign(cfg: &FieldConfig) -> f64 {
    if cfg.delta1 > 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// The normalization constant C₁ in its two closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct C1Forms {
    /// U₀/√(U₀² + λ₁²) · exp(−πΔ₁²U₀²/(16R³)).
    pub direct: f64,
    /// e^{−πν₀/4}/√2 · √(1 + ξ₀/√(ν₀ + ξ₀²)), root signed by
    /// [`scattering_root_sign`]; `None` for Δ₁ = 0 where it is 0/0.
    pub dimensionless: Option<f64>,
}

pub fn c1_forms(cfg: &FieldConfig) -> Result<C1Forms> {
    cfg.require_positive_delta0()?;
    let q = quasi_energies(cfg);
    let u0 = cfg.u0;
    let direct = u0 / u0.hypot(q.lambda1) * (-PI * (cfg.delta1 * u0).powi(2) / (16.0 * q.r.powi(3))).exp();
    let dimensionless = (cfg.delta1 != 0.0).then(|| {
        let d = dimensionless_params(cfg);
        let root = scattering_root_sign(cfg) * (d.nu0 + d.xi0 * d.xi0).sqrt();
        (-PI * d.nu0 / 4.0).exp() / 2f64.sqrt() * (1.0 + d.xi0 / root).sqrt()
    });
    Ok(C1Forms { direct, dimensionless })
}

/// C₁, the λ₁-branch weight that normalizes the pure λ₁ scattering state.
pub fn c1_normalization(cfg: &FieldConfig) -> Result<f64> {
    Ok(c1_forms(cfg)?.direct)
}

/// Everything computable from the field configuration alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    pub t0: Option<f64>,
    /// Signed Λ; `None` for Δ₀ = 0.
    pub lambda: Option<f64>,
    pub r: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub nu0: f64,
    pub xi0: f64,
    pub nu: Complex64,
    pub xi: Complex64,
    /// `None` unless Δ₀ > 0.
    pub c1: Option<f64>,
}

pub fn derived_params(cfg: &FieldConfig) -> DerivedParams {
    let q = quasi_energies(cfg);
    let d = dimensionless_params(cfg);
    DerivedParams {
        t0: crossing_time(cfg),
        lambda: lz_parameter(cfg).ok().map(|lz| lz.signed()),
        r: q.r,
        lambda1: q.lambda1,
        lambda2: q.lambda2,
        nu0: d.nu0,
        xi0: d.xi0,
        nu: d.nu,
        xi: d.xi,
        c1: c1_normalization(cfg).ok(),
    }
}
