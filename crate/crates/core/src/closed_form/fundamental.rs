use num_complex::Complex64;
use serde::Serialize;

use crate::field::{quasi_energies, FieldConfig};
use crate::specfun::{hermite_h, EvalPolicy};
use crate::{ModelError, Result};

/// Below this √t the t-derivatives are obtained by integrating the z-jet
/// (Simpson) instead of dividing f_z by z.
const SMALL_Z: f64 = 3e-3;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Root choice for the pre-factor exponents α₀ = iΔ₁(1 ± Δ₀/W), α₂ = i(Δ₀ ± W),
/// W = √(4U₀² + Δ₀²). The same sign is used for both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlphaBranch {
    Minus,
    Plus,
}

impl AlphaBranch {
    fn value(self) -> f64 {
        match self {
            AlphaBranch::Minus => -1.0,
            AlphaBranch::Plus => 1.0,
        }
    }
}

/// Quasi-energy branch λ₁ = Δ₀/2 + R or λ₂ = Δ₀/2 − R.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuasiBranch {
    Lambda1,
    Lambda2,
}

impl QuasiBranch {
    pub fn lambda(self, cfg: &FieldConfig) -> f64 {
        let q = quasi_energies(cfg);
        match self {
            QuasiBranch::Lambda1 => q.lambda1,
            QuasiBranch::Lambda2 => q.lambda2,
        }
    }
}

/// Parameters of the Hermite-pair solution
/// a₂ = e^{α₀√t + α₂t/2}(A·H_{−α/ε}(y) + H_{−α/ε−1}(y)), y = S√(−ε/2)(√t + δ/ε).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FundamentalParams {
    pub alpha0: Complex64,
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
    pub epsilon: Complex64,
    pub alpha: Complex64,
    pub q: Complex64,
    pub a: Complex64,
    pub s: Sign,
    pub branch: AlphaBranch,
    /// S√(−ε/2)
    pub y_scale: Complex64,
    /// δ/ε
    pub y_shift: Complex64,
}

impl FundamentalParams {
    /// Order of the leading Hermite function, −α/ε.
    pub fn order(&self) -> Complex64 {
        -self.alpha / self.epsilon
    }

    /// y(t) = S√(−ε/2)(√t + δ/ε).
    pub fn y(&self, t: f64) -> Complex64 {
        self.y_scale * (t.sqrt() + self.y_shift)
    }

    fn form(&self) -> HermitePairForm {
        HermitePairForm {
            p1: self.alpha0,
            p2: self.alpha2 / 2.0,
            h0: self.a,
            h1: Complex64::new(1.0, 0.0),
            nu: self.order(),
            w: self.y_scale,
            c: self.y_shift,
        }
    }
}

/// Fundamental parameters with the minus sign for both α₀ and α₂.
pub fn fundamental_params(cfg: &FieldConfig, s: Sign) -> Result<FundamentalParams> {
    fundamental_params_with(cfg, s, AlphaBranch::Minus)
}

pub fn fundamental_params_with(cfg: &FieldConfig, s: Sign, branch: AlphaBranch) -> Result<FundamentalParams> {
    if cfg.delta1() == 0.0 {
        return Err(ModelError::Domain(
            "the Hermite-pair solution degenerates at Delta1 = 0; use the Rabi solution".into(),
        ));
    }
    let (u0, d0, d1) = (cfg.u0(), cfg.delta0(), cfg.delta1());
    let w = (4.0 * u0 * u0 + d0 * d0).sqrt();
    let sg = branch.value();
    let alpha0 = I * d1 * (1.0 + sg * d0 / w);
    let alpha2 = I * (d0 + sg * w);
    let delta = 2.0 * (alpha0 - I * d1);
    let epsilon = 2.0 * (alpha2 - I * d0);
    let alpha = alpha0 * (alpha0 - 2.0 * I * d1);
    let q = alpha0;
    let y_scale = s.value() * (-epsilon / 2.0).sqrt();
    Ok(FundamentalParams {
        alpha0,
        alpha1: Complex64::new(0.0, 0.0),
        alpha2,
        gamma: Complex64::new(-1.0, 0.0),
        delta,
        epsilon,
        alpha,
        q,
        a: y_scale * (delta - q) / alpha,
        s,
        branch,
        y_scale,
        y_shift: delta / epsilon,
    })
}

/// Value and t-derivatives of a solution. The second derivative diverges like
/// 1/√t at the origin and is `None` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeJet {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Option<Complex64>,
}

/// Value and first three derivatives in z = √t.
#[derive(Debug, Clone, Copy, PartialEq)]
struct ZJet {
    f: Complex64,
    fz: Complex64,
    fzz: Complex64,
    fzzz: Complex64,
}

/// e^{p₁z + p₂z²}(h₀H_ν(x) + h₁H_{ν−1}(x)), x = w(z + c): the common shape of
/// both solution representations.
#[derive(Debug, Clone, Copy)]
struct HermitePairForm {
    p1: Complex64,
    p2: Complex64,
    h0: Complex64,
    h1: Complex64,
    nu: Complex64,
    w: Complex64,
    c: Complex64,
}

impl HermitePairForm {
    fn z_jet(&self, z: f64, policy: &EvalPolicy) -> Result<ZJet> {
        let x = self.w * (z + self.c);
        let nu = self.nu;
        let h_nu = hermite_h(nu, x, policy)?;
        let h_nu1 = hermite_h(nu - 1.0, x, policy)?;
        let h_nu2 = hermite_h(nu - 2.0, x, policy)?;
        // H′_μ = 2μH_{μ−1}, H″_μ = 2xH′_μ − 2μH_μ, H‴_μ = 2xH″_μ + 2(1 − μ)H′_μ
        let d_nu = 2.0 * nu * h_nu1;
        let d_nu1 = 2.0 * (nu - 1.0) * h_nu2;
        let dd_nu = 2.0 * x * d_nu - 2.0 * nu * h_nu;
        let dd_nu1 = 2.0 * x * d_nu1 - 2.0 * (nu - 1.0) * h_nu1;
        let ddd_nu = 2.0 * x * dd_nu + 2.0 * (1.0 - nu) * d_nu;
        let ddd_nu1 = 2.0 * x * dd_nu1 + 2.0 * (2.0 - nu) * d_nu1;
        let w = self.w;
        let g = self.h0 * h_nu + self.h1 * h_nu1;
        let gz = w * (self.h0 * d_nu + self.h1 * d_nu1);
        let gzz = w * w * (self.h0 * dd_nu + self.h1 * dd_nu1);
        let gzzz = w * w * w * (self.h0 * ddd_nu + self.h1 * ddd_nu1);

        let e = (self.p1 * z + self.p2 * z * z).exp();
        let l1 = self.p1 + 2.0 * self.p2 * z;
        let ez = l1 * e;
        let ezz = (l1 * l1 + 2.0 * self.p2) * e;
        let ezzz = (l1 * l1 * l1 + 6.0 * self.p2 * l1) * e;
        Ok(ZJet {
            f: e * g,
            fz: ez * g + e * gz,
            fzz: ezz * g + 2.0 * ez * gz + e * gzz,
            fzzz: ezzz * g + 3.0 * ezz * gz + 3.0 * ez * gzz + e * gzzz,
        })
    }

    fn time_jet(&self, t: f64, policy: &EvalPolicy) -> Result<TimeJet> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(ModelError::Domain(format!(
                "closed-form solutions need t >= 0, got {t}"
            )));
        }
        let z = t.sqrt();
        let jet = self.z_jet(z, policy)?;
        if z == 0.0 {
            // every solution has f_z(0) = 0, so f_t(0) = f_zz(0)/2
            return Ok(TimeJet {
                value: jet.f,
                d1: jet.fzz / 2.0,
                d2: None,
            });
        }
        if z < SMALL_Z {
            self.small_z_derivatives(z, jet, policy)
        } else {
            Ok(direct_derivatives(z, jet))
        }
    }
}

impl HermitePairForm {
    /// f_z = ∫₀^z f_zz and z f_zz − f_z = ∫₀^z s f_zzz, both by Simpson's rule.
    fn small_z_derivatives(&self, z: f64, jet: ZJet, policy: &EvalPolicy) -> Result<TimeJet> {
        let origin = self.z_jet(0.0, policy)?;
        let half = self.z_jet(0.5 * z, policy)?;
        Ok(TimeJet {
            value: jet.f,
            d1: (origin.fzz + 4.0 * half.fzz + jet.fzz) / 12.0,
            d2: Some((2.0 * half.fzzz + jet.fzzz) / (24.0 * z)),
        })
    }
}

fn direct_derivatives(z: f64, jet: ZJet) -> TimeJet {
    TimeJet {
        value: jet.f,
        d1: jet.fz / (2.0 * z),
        d2: Some((z * jet.fzz - jet.fz) / (4.0 * z * z * z)),
    }
}

/// Hermite-pair representation of a fundamental solution.
pub fn a2_fundamental_hermite(t: f64, params: &FundamentalParams, policy: &EvalPolicy) -> Result<Complex64> {
    Ok(a2_fundamental_hermite_jet(t, params, policy)?.value)
}

/// [`a2_fundamental_hermite`] with analytic first and second t-derivatives.
pub fn a2_fundamental_hermite_jet(t: f64, params: &FundamentalParams, policy: &EvalPolicy) -> Result<TimeJet> {
    params.form().time_jet(t, policy)
}

fn quasienergy_form(cfg: &FieldConfig, branch: QuasiBranch) -> Result<HermitePairForm> {
    let (u0, d0, d1) = (cfg.u0(), cfg.delta0(), cfg.delta1());
    if d1 == 0.0 {
        return Err(ModelError::Domain(
            "the quasi-energy representation is singular at Delta1 = 0; use the Rabi solution".into(),
        ));
    }
    let lambda = branch.lambda(cfg);
    let m = d0 - 2.0 * lambda;
    let nu = Complex64::new(0.0, -2.0 * d1 * d1 * u0 * u0 / (m * m * m));
    let w = (I * m).sqrt();
    Ok(HermitePairForm {
        p1: I * lambda * d1 / (lambda - d0 / 2.0),
        p2: I * lambda,
        h0: Complex64::new(1.0, 0.0),
        // i√t(Δ₀ − 2λ)/(Δ₁(Δ₀ − λ)) · dF/dt with dF/dt = 2νwH_{ν−1}/(2√t)
        h1: I * m * w * nu / (d1 * (d0 - lambda)),
        nu,
        w,
        c: Complex64::new(d1 * d0 / (m * m), 0.0),
    })
}

/// Quasi-energy representation of the fundamental solution on branch λ:
/// e^{iλ(t + Δ₁√t/(λ − Δ₀/2))}(F + i√t(Δ₀ − 2λ)/(Δ₁(Δ₀ − λ))·dF/dt),
/// F = H_ν(√(i(Δ₀ − 2λ))(√t + Δ₁Δ₀/(Δ₀ − 2λ)²)), ν = −2iΔ₁²U₀²/(Δ₀ − 2λ)³.
pub fn a2_fundamental_quasienergy(
    t: f64,
    cfg: &FieldConfig,
    branch: QuasiBranch,
    policy: &EvalPolicy,
) -> Result<Complex64> {
    Ok(a2_fundamental_quasienergy_jet(t, cfg, branch, policy)?.value)
}

pub fn a2_fundamental_quasienergy_jet(
    t: f64,
    cfg: &FieldConfig,
    branch: QuasiBranch,
    policy: &EvalPolicy,
) -> Result<TimeJet> {
    quasienergy_form(cfg, branch)?.time_jet(t, policy)
}

/// Hermite-pair parameters that reproduce one quasi-energy branch, with the
/// constant factor between the two representations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairedBranch {
    pub s: Sign,
    pub alpha_branch: AlphaBranch,
    /// a2_fundamental_hermite / a2_fundamental_quasienergy
    pub ratio: Complex64,
    /// max |r(t) − r̄| / |r̄| over the sample times
    pub spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchPairing {
    pub lambda1: PairedBranch,
    pub lambda2: PairedBranch,
}

pub const PAIRING_SAMPLE_TIMES: [f64; 5] = [0.5, 1.1, 2.0, 3.3, 5.0];

/// Finds, for each quasi-energy branch, the (S, α-branch) choice whose
/// Hermite-pair solution is a constant multiple of it.
pub fn branch_pairing(cfg: &FieldConfig, policy: &EvalPolicy) -> Result<BranchPairing> {
    let pair = |branch| -> Result<PairedBranch> {
        let mut best: Option<PairedBranch> = None;
        for s in [Sign::Plus, Sign::Minus] {
            for alpha_branch in [AlphaBranch::Minus, AlphaBranch::Plus] {
                let params = fundamental_params_with(cfg, s, alpha_branch)?;
                let ratios = PAIRING_SAMPLE_TIMES
                    .iter()
                    .map(|&t| {
                        Ok(a2_fundamental_hermite(t, &params, policy)?
                            / a2_fundamental_quasienergy(t, cfg, branch, policy)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let (ratio, spread) = ratio_spread(&ratios);
                if best.is_none_or(|b| spread < b.spread) {
                    best = Some(PairedBranch {
                        s,
                        alpha_branch,
                        ratio,
                        spread,
                    });
                }
            }
        }
        Ok(best.expect("four candidates"))
    };
    Ok(BranchPairing {
        lambda1: pair(QuasiBranch::Lambda1)?,
        lambda2: pair(QuasiBranch::Lambda2)?,
    })
}

/// Mean of the ratios and their maximum relative deviation from it.
pub fn ratio_spread(ratios: &[Complex64]) -> (Complex64, f64) {
    let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|r| (r - mean).norm()).fold(0.0, f64::max) / mean.norm();
    (mean, spread)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> FieldConfig {
        FieldConfig::new(1.0, 4.0, -5.0).unwrap()
    }

    #[test]
    fn minus_branch_exponents() {
        let p = fundamental_params(&fig1(), Sign::Plus).unwrap();
        let s5 = 5f64.sqrt();
        assert!((p.alpha2 - Complex64::new(0.0, 4.0 - 2.0 * s5)).norm() < 1e-14);
        assert!((p.alpha2.im + 0.472_136_0).abs() < 1e-7);
        assert!((p.alpha0.im + 0.527_864_0).abs() < 1e-7);
        assert!((p.alpha0 - Complex64::new(0.0, -5.0 * (1.0 - 4.0 / (2.0 * s5)))).norm() < 1e-14);
        assert_eq!(p.q, p.alpha0);
        assert_eq!(p.gamma, Complex64::new(-1.0, 0.0));
        assert_eq!(p.alpha1, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn alpha2_solves_its_quadratic() {
        // α₂² − iα₂δ₂ + U₀*² = 0 with δ₂ = 2Δ₀, U₀* = 2U₀
        for branch in [AlphaBranch::Minus, AlphaBranch::Plus] {
            let p = fundamental_params_with(&fig1(), Sign::Plus, branch).unwrap();
            let res = p.alpha2 * p.alpha2 - I * p.alpha2 * 8.0 + 4.0;
            assert!(res.norm() < 1e-13);
        }
    }

    #[test]
    fn rabi_limit_is_rejected() {
        let cfg = FieldConfig::new(1.0, 4.0, 0.0).unwrap();
        assert!(matches!(
            fundamental_params(&cfg, Sign::Plus),
            Err(ModelError::Domain(_))
        ));
        let p = EvalPolicy::default();
        assert!(a2_fundamental_quasienergy(1.0, &cfg, QuasiBranch::Lambda1, &p).is_err());
    }

    #[test]
    fn slope_vanishes_in_z_at_origin() {
        let p = EvalPolicy::default();
        let params = fundamental_params(&fig1(), Sign::Plus).unwrap();
        let jet = params.form().z_jet(0.0, &p).unwrap();
        assert!(jet.fz.norm() < 1e-12 * jet.f.norm().max(jet.fzz.norm()));
        let q = quasienergy_form(&fig1(), QuasiBranch::Lambda2)
            .unwrap()
            .z_jet(0.0, &p)
            .unwrap();
        assert!(q.fz.norm() < 1e-12 * q.f.norm().max(q.fzz.norm()));
    }

    #[test]
    fn pairing_on_fig1() {
        let p = EvalPolicy::default();
        let pairing = branch_pairing(&fig1(), &p).unwrap();
        assert!(pairing.lambda1.spread < 1e-9);
        assert!(pairing.lambda2.spread < 1e-9);
        assert_eq!(pairing.lambda1.alpha_branch, AlphaBranch::Plus);
        assert_eq!(pairing.lambda2.alpha_branch, AlphaBranch::Minus);
    }

    #[test]
    fn time_jet_domain() {
        let p = EvalPolicy::default();
        let params = fundamental_params(&fig1(), Sign::Plus).unwrap();
        assert!(a2_fundamental_hermite(-1.0, &params, &p).is_err());
        let origin = a2_fundamental_hermite_jet(0.0, &params, &p).unwrap();
        assert!(origin.d2.is_none());
        let form = params.form();
        for scale in [0.5, 1.0] {
            let z = scale * SMALL_Z;
            let jet = form.z_jet(z, &p).unwrap();
            let simpson = form.small_z_derivatives(z, jet, &p).unwrap();
            let direct = direct_derivatives(z, jet);
            assert!((simpson.d1 - direct.d1).norm() < 1e-8 * direct.d1.norm());
            let (s2, d2) = (simpson.d2.unwrap(), direct.d2.unwrap());
            assert!((s2 - d2).norm() < 1e-6 * d2.norm(), "{s2} vs {d2}");
        }
    }
}
