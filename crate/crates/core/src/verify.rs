//! Acceptance checks AC1–AC9. Every check takes the special-function policy
//! so that a loosened policy can be shown to break them.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closed_form::{
    a2_fundamental_hermite, a2_fundamental_hermite_jet, a2_fundamental_quasienergy_jet, approx_strong_field,
    approx_weak_field, asymptote_remainder, branch_pairing, fundamental_params, fundamental_params_with,
    scattering_a2_at_zero, AlphaBranch, AmplitudePair, AnalyticSolution, Lambda2Prefactor, QuasiBranch, Sign,
    SolutionCoefficients, TimeJet,
};
use crate::field::{c1_forms, quasi_energies, FieldConfig};
use crate::heun::{a2_from_series, biconfluent_params, hermite_series_coeffs, model_class_config};
use crate::oracle::{integrate_two_state, residual_eq3, IntegrationSpec};
use crate::specfun::{hermite_h, hermite_h_derivative, EvalPolicy};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

pub const CRITERIA: [(&str, &str); 9] = [
    ("AC1", "oracle equivalence of the analytic trajectory"),
    ("AC2", "second-order equation residual of both representations"),
    ("AC3", "representation and normalization-constant equivalences"),
    ("AC4", "termination of the Hermite-function series"),
    ("AC5", "large-time asymptotes of the fundamental solutions"),
    ("AC6", "scattering amplitude and its weak/strong-field forms"),
    ("AC7", "initial first-level population in the non-crossing quadrant"),
    ("AC8", "special-function kernel"),
    ("AC9", "probability conservation"),
];

pub fn list_criteria() -> Vec<(String, String)> {
    CRITERIA
        .iter()
        .map(|(id, title)| (id.to_string(), title.to_string()))
        .collect()
}

/// Runs one criterion by id; `None` for an unknown id.
pub fn run_criterion(id: &str, policy: &EvalPolicy) -> Option<CriterionReport> {
    let (id, title) = CRITERIA.iter().find(|(c, _)| c.eq_ignore_ascii_case(id))?;
    let outcome = match *id {
        "AC1" => ac1_oracle_equivalence(policy),
        "AC2" => ac2_residual(policy),
        "AC3" => ac3_equivalences(policy),
        "AC4" => ac4_series_termination(policy),
        "AC5" => ac5_asymptotics(policy),
        "AC6" => ac6_scattering(policy),
        "AC7" => ac7_non_crossing_population(policy),
        "AC8" => ac8_special_functions(policy),
        _ => ac9_conservation(policy),
    };
    let (passed, detail) = match outcome {
        Ok(pd) => pd,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionReport {
        id: id.to_string(),
        title: title.to_string(),
        passed,
        detail,
    })
}

pub fn run_all(policy: &EvalPolicy) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .filter_map(|(id, _)| run_criterion(id, policy))
        .collect()
}

type Outcome = Result<(bool, String)>;

pub fn fig1_config() -> FieldConfig {
    FieldConfig::new(1.0, 4.0, -5.0).expect("valid")
}

/// Fig. 1 parameters followed by `n` draws with Δ₀ ∈ [1, 6], |Δ₁| ∈ [0.1, 6], U₀ ∈ [0.3, 3].
pub fn sample_configs(n: usize, seed: u64) -> Vec<FieldConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![fig1_config()];
    for _ in 0..n {
        let d0 = rng.random_range(1.0..6.0);
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let d1 = sign * rng.random_range(0.1..6.0);
        let u0 = rng.random_range(0.3..3.0);
        out.push(FieldConfig::new(u0, d0, d1).expect("valid"));
    }
    out
}

fn cfg_label(cfg: &FieldConfig) -> String {
    format!("({:.4}, {:.4}, {:.4})", cfg.u0(), cfg.delta0(), cfg.delta1())
}

fn ground_state() -> AmplitudePair {
    AmplitudePair::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
}

/// Largest |a₂| discrepancy between analytic and oracle trajectories on t ∈ [0, 20]
/// from (a₁, a₂) = (1, 0), plus the analytic and oracle norm deviations.
fn oracle_comparison(cfg: &FieldConfig, policy: &EvalPolicy) -> Result<(f64, f64, f64)> {
    let spec = IntegrationSpec::uniform(0.0, 20.0, 0.1);
    let traj = integrate_two_state(cfg, &ground_state(), &spec)?;
    let analytic = AnalyticSolution::from_initial(&ground_state(), cfg, policy)?;
    let mut max_diff: f64 = 0.0;
    let mut max_norm: f64 = 0.0;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let a = analytic.at(*t)?;
        max_diff = max_diff.max((a.a2 - s.a2).norm());
        max_norm = max_norm.max((a.norm_sqr() - 1.0).abs());
    }
    Ok((max_diff, max_norm, traj.norm_drift / spec.rel_tol))
}

pub fn ac1_oracle_equivalence(policy: &EvalPolicy) -> Outcome {
    let mut worst = (0.0, String::new());
    for cfg in sample_configs(10, 1) {
        let (diff, _, _) = oracle_comparison(&cfg, policy)?;
        if diff >= worst.0 || diff.is_nan() {
            worst = (diff, cfg_label(&cfg));
        }
    }
    Ok((
        worst.0 <= 1e-6,
        format!(
            "max |a2_analytic - a2_ode| = {:.3e} at {} (limit 1e-6)",
            worst.0, worst.1
        ),
    ))
}

fn jet_residual(t: f64, jet: &TimeJet, cfg: &FieldConfig) -> Result<f64> {
    let d2 = jet.d2.unwrap_or(Complex64::new(f64::NAN, 0.0));
    residual_eq3(jet.value, jet.d1, d2, t, cfg)
}

pub fn ac2_residual(policy: &EvalPolicy) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for cfg in sample_configs(9, 2) {
        let hermite_forms = [
            fundamental_params(&cfg, Sign::Plus)?,
            fundamental_params(&cfg, Sign::Minus)?,
        ];
        for _ in 0..50 {
            let t = rng.random_range(0.01..20.0);
            for fp in &hermite_forms {
                worst = worst.max(jet_residual(t, &a2_fundamental_hermite_jet(t, fp, policy)?, &cfg)?);
            }
            for branch in [QuasiBranch::Lambda1, QuasiBranch::Lambda2] {
                let jet = a2_fundamental_quasienergy_jet(t, &cfg, branch, policy)?;
                worst = worst.max(jet_residual(t, &jet, &cfg)?);
            }
        }
    }
    let worst = if worst.is_nan() { f64::INFINITY } else { worst };
    Ok((
        worst <= 1e-8,
        format!("max relative residual = {worst:.3e} (limit 1e-8)"),
    ))
}

pub fn ac3_equivalences(policy: &EvalPolicy) -> Outcome {
    let mut spread: f64 = 0.0;
    for cfg in sample_configs(9, 3) {
        let pairing = branch_pairing(&cfg, policy)?;
        spread = spread.max(pairing.lambda1.spread).max(pairing.lambda2.spread);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut c1_gap: f64 = 0.0;
    for i in 0..100 {
        let u0 = 10f64.powf(-1.0 + 3.0 * i as f64 / 99.0);
        let d0 = rng.random_range(0.5..8.0);
        let d1 = rng.random_range(-8.0..8.0);
        let forms = c1_forms(&FieldConfig::new(u0, d0, d1)?)?;
        if let Some(dimless) = forms.dimensionless {
            c1_gap = c1_gap.max((forms.direct - dimless).abs() / forms.direct.abs().max(1e-300));
        }
    }
    let fig1 = c1_forms(&fig1_config())?;
    let five_digits = |x: f64| (x - 0.14811).abs() <= 0.5e-5;
    let fig1_ok = five_digits(fig1.direct) && fig1.dimensionless.is_some_and(five_digits);
    let spread = if spread.is_nan() { f64::INFINITY } else { spread };
    Ok((
        spread <= 1e-8 && c1_gap <= 1e-10 && fig1_ok,
        format!(
            "ratio spread = {spread:.3e} (limit 1e-8); C1 form gap = {c1_gap:.3e} (limit 1e-10); \
             C1(1, 4, -5) = {:.8} / {:.8} (expect 0.14811)",
            fig1.direct,
            fig1.dimensionless.unwrap_or(f64::NAN)
        ),
    ))
}

pub fn ac4_series_termination(policy: &EvalPolicy) -> Outcome {
    let mut tail: f64 = 0.0;
    let mut perturbed_min = f64::INFINITY;
    let mut match_gap: f64 = 0.0;
    for (i, cfg) in sample_configs(50, 4).iter().enumerate() {
        let cc = model_class_config(cfg);
        let bp = biconfluent_params(&cc, AlphaBranch::Minus)?;
        for sign in [Sign::Plus, Sign::Minus] {
            let series = hermite_series_coeffs(&bp, sign, 3)?;
            let c = &series.coefficients;
            let head = c[0].norm().max(c[1].norm());
            tail = tail.max(c[2].norm().max(c[3].norm()) / head);
            let mut shifted = bp;
            shifted.q += 0.1;
            let broken = hermite_series_coeffs(&shifted, sign, 3)?;
            let bc = &broken.coefficients;
            perturbed_min = perturbed_min.min(bc[2].norm().max(bc[3].norm()) / bc[0].norm().max(bc[1].norm()));
            if i < 10 {
                let fp = fundamental_params_with(cfg, sign, AlphaBranch::Minus)?;
                for t in [0.25f64, 1.0, 4.0] {
                    let lhs = a2_from_series(&series, &bp, Complex64::new(t.sqrt(), 0.0), policy)?;
                    let rhs = a2_fundamental_hermite(t, &fp, policy)?;
                    match_gap = match_gap.max((lhs - rhs).norm() / rhs.norm().max(1.0));
                }
            }
        }
    }
    Ok((
        tail <= 1e-12 && perturbed_min > 1e-12 && match_gap <= 1e-10,
        format!(
            "max |c2|,|c3| / max(|c0|,|c1|) = {tail:.3e} (limit 1e-12); with q + 0.1 the smallest is \
             {perturbed_min:.3e}; series vs closed form gap = {match_gap:.3e} (limit 1e-10)"
        ),
    ))
}

/// Moduli of the remainders on a log grid over [10³, 10⁴].
fn remainder_moduli(
    cfg: &FieldConfig,
    branch: QuasiBranch,
    pref: Lambda2Prefactor,
    policy: &EvalPolicy,
) -> Result<Vec<(f64, f64)>> {
    (0..=10)
        .map(|i| {
            let t = 10f64.powf(3.0 + i as f64 / 10.0);
            Ok((t, asymptote_remainder(t, cfg, branch, pref, policy)?.norm()))
        })
        .collect()
}

/// (max − min)/mean and the mean.
fn relative_spread(values: &[f64]) -> (f64, f64) {
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    ((max - min) / mean, mean)
}

pub fn ac5_asymptotics(policy: &EvalPolicy) -> Outcome {
    let cfg = fig1_config();
    let q = quasi_energies(&cfg);
    let l1 = remainder_moduli(&cfg, QuasiBranch::Lambda1, Lambda2Prefactor::QuarterPiNu0, policy)?;
    let l1_values: Vec<f64> = l1.iter().map(|(_, m)| *m).collect();
    let (l1_spread, l1_mean) = relative_spread(&l1_values);
    // diagnostic only: divide out the next term 1 − Δ₁λ₁/(4R²√t) of the modulus
    let corrected: Vec<f64> = l1
        .iter()
        .map(|(t, m)| m / (1.0 - cfg.delta1() * q.lambda1 / (4.0 * q.r * q.r * t.sqrt())))
        .collect();
    let (corrected_spread, _) = relative_spread(&corrected);

    let mut l2 = Vec::new();
    for pref in [Lambda2Prefactor::QuarterPiNu0, Lambda2Prefactor::PiNu0] {
        let values: Vec<f64> = remainder_moduli(&cfg, QuasiBranch::Lambda2, pref, policy)?
            .iter()
            .map(|(_, m)| *m)
            .collect();
        l2.push(relative_spread(&values));
    }
    let (quarter, full) = (l2[0], l2[1]);
    let l2_ok = quarter.0 <= 0.01 && (quarter.1 - 1.0).abs() <= 0.01;
    let resolved = if (quarter.1 - 1.0).abs() < (full.1 - 1.0).abs() {
        "exp(pi nu0 / 4)"
    } else {
        "exp(pi nu0)"
    };
    Ok((
        l1_spread <= 0.01 && l2_ok,
        format!(
            "lambda1 modulus spread = {:.3e} (limit 1e-2, mean {:.5}; with the 1/sqrt(t) modulus term divided out {:.3e}); \
             lambda2 with exp(pi nu0/4): spread {:.3e}, mean {:.5}; with exp(pi nu0): mean {:.5}; prefactor resolved as {}",
            l1_spread, l1_mean, corrected_spread, quarter.0, quarter.1, full.1, resolved
        ),
    ))
}

pub fn ac6_scattering(policy: &EvalPolicy) -> Outcome {
    let at = |u0: f64| FieldConfig::new(u0, 4.0, -5.0);
    let mut min_p2 = f64::INFINITY;
    for i in 0..50 {
        let u0 = 10f64.powf(-1.0 + 3.0 * i as f64 / 49.0);
        min_p2 = min_p2.min(scattering_a2_at_zero(&at(u0)?, policy)?.p2);
    }
    let weak_err = |u0: f64| -> Result<f64> {
        let cfg = at(u0)?;
        Ok((approx_weak_field(&cfg)?.norm_sqr() - scattering_a2_at_zero(&cfg, policy)?.p2).abs())
    };
    let strong_err = |u0: f64| -> Result<f64> {
        let cfg = at(u0)?;
        Ok((approx_strong_field(&cfg)?.norm_sqr() - scattering_a2_at_zero(&cfg, policy)?.p2).abs())
    };
    let weak: Vec<f64> = [0.2, 0.1, 0.05, 0.02]
        .iter()
        .map(|u| weak_err(*u))
        .collect::<Result<_>>()?;
    let strong: Vec<f64> = [20.0, 50.0, 100.0, 200.0]
        .iter()
        .map(|u| strong_err(*u))
        .collect::<Result<_>>()?;
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let passed = min_p2 > 0.0 && weak[3] <= 1e-3 && strong[2] <= 1e-2 && decreasing(&weak) && decreasing(&strong);
    Ok((
        passed,
        format!(
            "min p2(0) = {min_p2:.4e}; weak-field error at U0 = 0.02: {:.3e} (limit 1e-3), sequence {:?}; \
             strong-field error at U0 = 100: {:.3e} (limit 1e-2), sequence {:?}",
            weak[3],
            weak.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>(),
            strong[2],
            strong.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>()
        ),
    ))
}

pub fn ac7_non_crossing_population(policy: &EvalPolicy) -> Outcome {
    let mut min_p1 = f64::INFINITY;
    let mut at = (0.0, 0.0);
    for i in 0..15 {
        for j in 0..15 {
            let d0 = 1.0 + 0.5 * i as f64;
            let d1 = 1.0 + 0.5 * j as f64;
            let p1 = scattering_a2_at_zero(&FieldConfig::new(1.0, d0, d1)?, policy)?.p1;
            if p1 < min_p1 {
                min_p1 = p1;
                at = (d0, d1);
            }
        }
    }
    Ok((
        min_p1 >= 0.8,
        format!("min p1(0) = {min_p1:.4} at (D0, D1) = {at:?} (limit 0.8)"),
    ))
}

fn hermite_polynomial(n: usize, x: Complex64) -> Complex64 {
    let (mut prev, mut cur) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn ac8_special_functions(policy: &EvalPolicy) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut integer_gap: f64 = 0.0;
    for _ in 0..40 {
        let z = Complex64::new(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
        for n in 0..=10 {
            let exact = hermite_polynomial(n, z);
            let value = hermite_h(Complex64::new(n as f64, 0.0), z, policy)?;
            integer_gap = integer_gap.max((value - exact).norm() / exact.norm().max(1.0));
        }
    }
    let mut recurrence: f64 = 0.0;
    let mut derivative: f64 = 0.0;
    for _ in 0..50 {
        let nu = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let z = Complex64::new(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
        let (hp, h0, hm) = (
            hermite_h(nu + 1.0, z, policy)?,
            hermite_h(nu, z, policy)?,
            hermite_h(nu - 1.0, z, policy)?,
        );
        let terms = [hp, -2.0 * z * h0, 2.0 * nu * hm];
        let size: f64 = terms.iter().map(|x| x.norm()).sum();
        recurrence = recurrence.max(terms.iter().sum::<Complex64>().norm() / size);
        let h = 1e-4;
        let fd = (hermite_h(nu, z + h, policy)? - hermite_h(nu, z - h, policy)?) / (2.0 * h);
        let d = hermite_h_derivative(nu, z, policy)?;
        derivative = derivative.max((d - fd).norm() / d.norm().max(1.0));
    }
    let cfg = FieldConfig::new(1.0, 4.0, 0.0)?;
    let spec = IntegrationSpec::uniform(0.0, 20.0, 0.1);
    let traj = integrate_two_state(&cfg, &ground_state(), &spec)?;
    let analytic = AnalyticSolution::from_initial(&ground_state(), &cfg, policy)?;
    let mut rabi: f64 = 0.0;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let a = analytic.at(*t)?;
        rabi = rabi.max((a.a1 - s.a1).norm()).max((a.a2 - s.a2).norm());
    }
    let nan_safe = |x: f64| if x.is_nan() { f64::INFINITY } else { x };
    let (integer_gap, recurrence, derivative) = (nan_safe(integer_gap), nan_safe(recurrence), nan_safe(derivative));
    Ok((
        integer_gap <= 1e-10 && recurrence <= 1e-9 && derivative <= 1e-6 && rabi <= 1e-8,
        format!(
            "integer orders {integer_gap:.3e} (limit 1e-10); recurrence {recurrence:.3e} (limit 1e-9); \
             derivative identity {derivative:.3e} (limit 1e-6); Rabi vs oracle {rabi:.3e} (limit 1e-8)"
        ),
    ))
}

pub fn ac9_conservation(policy: &EvalPolicy) -> Outcome {
    let mut analytic: f64 = 0.0;
    let mut oracle: f64 = 0.0;
    for cfg in sample_configs(4, 9) {
        let (_, norm, drift) = oracle_comparison(&cfg, policy)?;
        analytic = analytic.max(norm);
        oracle = oracle.max(drift);
    }
    // a state starting on the λ₁ branch: normalized through C₁
    let cfg = fig1_config();
    let c1 = c1_forms(&cfg)?.direct;
    let coeffs = SolutionCoefficients::new(Complex64::new(c1, 0.0), Complex64::new(0.0, 0.0));
    let start = AnalyticSolution {
        cfg,
        coeffs,
        policy: *policy,
    };
    for i in 0..=40 {
        let t = 0.5 * i as f64;
        analytic = analytic.max((start.at(t)?.norm_sqr() - 1.0).abs());
    }
    Ok((
        analytic <= 1e-8 && oracle <= 10.0,
        format!(
            "analytic max ||a1|^2 + |a2|^2 - 1| = {analytic:.3e} (limit 1e-8); oracle drift / rel_tol = {oracle:.3} (limit 10)"
        ),
    ))
}
