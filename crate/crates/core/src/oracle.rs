//! Adaptive numerical integration of the coupled amplitude equations
//! i·da₁/dt = U₀e^{−iδ}a₂, i·da₂/dt = U₀e^{iδ}a₁, used as an independent
//! check of the closed-form solutions.
//!
//! The default variable is s = √t, in which the right-hand side
//! da₁/ds = −2is·U₀e^{−iδ(s²)}a₂, da₂/ds = −2is·U₀e^{iδ(s²)}a₁ with
//! δ(s²) = Δ₀s² + 2Δ₁s is smooth at the origin. Stepping is a Dormand–Prince
//! 5(4) pair with PI step-size control; steps are shortened to land exactly
//! on the requested output times.

use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::AmplitudePair;
use crate::field::{detuning, phase, FieldConfig};
use crate::{ModelError, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Local errors are held to this fraction of the requested tolerances so that
/// the accumulated norm drift stays below 10 × rel_tol over long runs.
const TOL_FRACTION: f64 = 0.1;

type State = [Complex64; 2];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrationSpec {
    pub t_start: f64,
    pub t_end: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    pub output_grid: Vec<f64>,
    /// Integrate b₂ = a₂e^{−iλt}, b₁ = a₁e^{−i(λt − δ)} instead of the lab
    /// amplitudes. With λ a quasi-energy the fast phase of that branch is
    /// removed, which keeps step counts bounded at large t.
    pub frame: Option<f64>,
}

impl IntegrationSpec {
    pub fn new(t_start: f64, t_end: f64, output_grid: Vec<f64>) -> Self {
        IntegrationSpec {
            t_start,
            t_end,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 10_000_000,
            output_grid,
            frame: None,
        }
    }

    /// Uniform grid t_start, t_start + dt, ... up to and including t_end.
    pub fn uniform(t_start: f64, t_end: f64, dt: f64) -> Self {
        let n = ((t_end - t_start) / dt + 1e-9).floor() as usize;
        let mut grid: Vec<f64> = (0..=n).map(|i| t_start + i as f64 * dt).collect();
        if let Some(last) = grid.last_mut() {
            if (t_end - *last).abs() < 1e-9 * dt {
                *last = t_end;
            } else {
                grid.push(t_end);
            }
        }
        Self::new(t_start, t_end, grid)
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_frame(mut self, lambda: f64) -> Self {
        self.frame = Some(lambda);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_start >= 0.0) || !(self.t_end > self.t_start) || !self.t_end.is_finite() {
            return Err(ModelError::InvalidConfig(format!(
                "need 0 <= t_start < t_end, got [{}, {}]",
                self.t_start, self.t_end
            )));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(ModelError::InvalidConfig("tolerances must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(ModelError::InvalidConfig("max_steps must be positive".into()));
        }
        let inside = self.output_grid.iter().all(|t| *t >= self.t_start && *t <= self.t_end);
        let sorted = self.output_grid.windows(2).all(|w| w[0] <= w[1]);
        if !inside || !sorted {
            return Err(ModelError::InvalidConfig(
                "output grid must be sorted and lie within [t_start, t_end]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<AmplitudePair>,
    /// Largest deviation of |a₁|² + |a₂|² from its initial value over all accepted steps.
    pub norm_drift: f64,
    /// Sum of the local error estimates of the accepted steps.
    pub error_estimate: f64,
    pub steps: usize,
    pub rejected: usize,
}

/// Integrates from a normalized initial state.
pub fn integrate_two_state(cfg: &FieldConfig, initial: &AmplitudePair, spec: &IntegrationSpec) -> Result<Trajectory> {
    let norm = initial.norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(ModelError::InvalidConfig(format!(
            "initial state must be normalized, |a1|^2 + |a2|^2 = {norm}"
        )));
    }
    integrate_two_state_unnormalized(cfg, initial, spec)
}

/// Same as [`integrate_two_state`] without the normalization requirement.
pub fn integrate_two_state_unnormalized(
    cfg: &FieldConfig,
    initial: &AmplitudePair,
    spec: &IntegrationSpec,
) -> Result<Trajectory> {
    spec.validate()?;
    let system = System {
        cfg: *cfg,
        frame: spec.frame,
    };
    let y0 = system.to_frame(spec.t_start, [initial.a1, initial.a2])?;
    let targets: Vec<f64> = spec.output_grid.iter().map(|t| t.sqrt()).collect();
    let rhs = |s: f64, y: &State| system.rhs_s(s, y);
    let run = dormand_prince(rhs, true, spec.t_start.sqrt(), spec.t_end.sqrt(), y0, &targets, spec)?;
    system.finish(run, spec)
}

/// Integration in the raw time variable, for t_start > 0 only.
pub fn integrate_two_state_in_t(
    cfg: &FieldConfig,
    initial: &AmplitudePair,
    spec: &IntegrationSpec,
) -> Result<Trajectory> {
    spec.validate()?;
    if spec.t_start <= 0.0 {
        return Err(ModelError::Domain(
            "raw-time integration needs t_start > 0; use the s = sqrt(t) form from the origin".into(),
        ));
    }
    let system = System {
        cfg: *cfg,
        frame: spec.frame,
    };
    let y0 = system.to_frame(spec.t_start, [initial.a1, initial.a2])?;
    let rhs = |t: f64, y: &State| system.rhs_t(t, y);
    let run = dormand_prince(rhs, false, spec.t_start, spec.t_end, y0, &spec.output_grid, spec)?;
    system.finish(run, spec)
}

struct System {
    cfg: FieldConfig,
    frame: Option<f64>,
}

impl System {
    fn frame_phases(&self, lambda: f64, t: f64) -> Result<(Complex64, Complex64)> {
        let d = phase(t, &self.cfg)?;
        let e1 = Complex64::from_polar(1.0, lambda * t - d);
        let e2 = Complex64::from_polar(1.0, lambda * t);
        Ok((e1, e2))
    }

    fn to_frame(&self, t: f64, a: State) -> Result<State> {
        match self.frame {
            None => Ok(a),
            Some(lambda) => {
                let (e1, e2) = self.frame_phases(lambda, t)?;
                Ok([a[0] / e1, a[1] / e2])
            }
        }
    }

    fn to_lab(&self, t: f64, b: State) -> Result<State> {
        match self.frame {
            None => Ok(b),
            Some(lambda) => {
                let (e1, e2) = self.frame_phases(lambda, t)?;
                Ok([b[0] * e1, b[1] * e2])
            }
        }
    }

    fn rhs_s(&self, s: f64, y: &State) -> State {
        let (u0, d0, d1) = (self.cfg.u0(), self.cfg.delta0(), self.cfg.delta1());
        let two_s = 2.0 * s;
        match self.frame {
            None => {
                let e = Complex64::from_polar(1.0, d0 * s * s + 2.0 * d1 * s);
                [-I * two_s * u0 * y[1] / e, -I * two_s * u0 * e * y[0]]
            }
            Some(lambda) => {
                // 2s·δ_t = 2Δ₀s + 2Δ₁ stays finite at s = 0
                let two_s_detuning = 2.0 * d0 * s + 2.0 * d1;
                [
                    -I * ((two_s * lambda - two_s_detuning) * y[0] + two_s * u0 * y[1]),
                    -I * two_s * (lambda * y[1] + u0 * y[0]),
                ]
            }
        }
    }

    fn rhs_t(&self, t: f64, y: &State) -> State {
        let u0 = self.cfg.u0();
        match self.frame {
            None => {
                let e = Complex64::from_polar(1.0, phase(t, &self.cfg).unwrap_or(0.0));
                [-I * u0 * y[1] / e, -I * u0 * e * y[0]]
            }
            Some(lambda) => {
                let det = detuning(t, &self.cfg).unwrap_or(0.0);
                [
                    -I * ((lambda - det) * y[0] + u0 * y[1]),
                    -I * (lambda * y[1] + u0 * y[0]),
                ]
            }
        }
    }

    fn finish(&self, run: Run, spec: &IntegrationSpec) -> Result<Trajectory> {
        let mut states = Vec::with_capacity(run.outputs.len());
        for (t, b) in spec.output_grid.iter().zip(run.outputs) {
            let a = self.to_lab(*t, b)?;
            states.push(AmplitudePair::new(a[0], a[1]));
        }
        Ok(Trajectory {
            times: spec.output_grid.clone(),
            states,
            norm_drift: run.norm_drift,
            error_estimate: run.error_estimate,
            steps: run.steps,
            rejected: run.rejected,
        })
    }
}

struct Run {
    outputs: Vec<State>,
    norm_drift: f64,
    error_estimate: f64,
    steps: usize,
    rejected: usize,
}

// Dormand–Prince 5(4) tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn comb(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (w, k) in terms {
        out[0] += h * w * k[0];
        out[1] += h * w * k[1];
    }
    out
}

fn dormand_prince<F>(
    f: F,
    in_s: bool,
    x0: f64,
    x_end: f64,
    y0: State,
    targets: &[f64],
    spec: &IntegrationSpec,
) -> Result<Run>
where
    F: Fn(f64, &State) -> State,
{
    const SAFETY: f64 = 0.9;
    const BETA: f64 = 0.04;
    const EXPO: f64 = 0.2 - BETA * 0.75;
    let norm0 = y0[0].norm_sqr() + y0[1].norm_sqr();
    let mut outputs = Vec::with_capacity(targets.len());
    let mut next_target = 0;
    let mut x = x0;
    let mut y = y0;
    while next_target < targets.len() && targets[next_target] <= x {
        outputs.push(y);
        next_target += 1;
    }
    let mut k1 = f(x, &y);
    let mut h = (x_end - x0).min(1e-2 * (1.0 + x0));
    let mut err_prev: f64 = 1e-4;
    let mut norm_drift: f64 = 0.0;
    let mut error_estimate = 0.0;
    let (mut steps, mut rejected) = (0usize, 0usize);
    let time = |x: f64| if in_s { x * x } else { x };
    while x < x_end {
        if steps + rejected >= spec.max_steps {
            return Err(ModelError::StepLimitExceeded {
                max_steps: spec.max_steps,
                t: time(x),
            });
        }
        let stop = if next_target < targets.len() {
            targets[next_target].min(x_end)
        } else {
            x_end
        };
        let mut landing = false;
        if x + h >= stop * (1.0 - 1e-15) {
            h = stop - x;
            landing = true;
        }
        if h <= 1e-14 * x.abs().max(1e-10) {
            return Err(ModelError::ToleranceUnachievable { t: time(x) });
        }
        let k2 = f(x + C2 * h, &comb(&y, h, &[(A21, &k1)]));
        let k3 = f(x + C3 * h, &comb(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(x + C4 * h, &comb(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            x + C5 * h,
            &comb(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            x + h,
            &comb(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = comb(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(x + h, &y_new);
        let mut err: f64 = 0.0;
        let mut err_abs: f64 = 0.0;
        for c in 0..2 {
            let e = h * (E1 * k1[c] + E3 * k3[c] + E4 * k4[c] + E5 * k5[c] + E6 * k6[c] + E7 * k7[c]);
            let scale = TOL_FRACTION * (spec.abs_tol + spec.rel_tol * y[c].norm().max(y_new[c].norm()));
            err = err.max(e.norm() / scale);
            err_abs = err_abs.max(e.norm());
        }
        if err <= 1.0 {
            steps += 1;
            x = if landing { stop } else { x + h };
            y = y_new;
            k1 = k7;
            error_estimate += err_abs;
            let norm = y[0].norm_sqr() + y[1].norm_sqr();
            norm_drift = norm_drift.max((norm - norm0).abs());
            while next_target < targets.len() && targets[next_target] <= x {
                outputs.push(y);
                next_target += 1;
            }
            let err_c = err.max(1e-10);
            let fac = (SAFETY * err_prev.powf(BETA) / err_c.powf(EXPO)).clamp(0.2, 10.0);
            err_prev = err_c;
            if !landing {
                h *= fac;
            } else {
                h = (h * fac).max(h);
            }
        } else {
            rejected += 1;
            h *= (SAFETY / err.powf(EXPO)).clamp(0.2, 1.0);
        }
    }
    while outputs.len() < targets.len() {
        outputs.push(y);
    }
    Ok(Run {
        outputs,
        norm_drift,
        error_estimate,
        steps,
        rejected,
    })
}

/// Relative residual |a₂″ − iδ_t a₂′ + U₀²a₂| / (|a₂″| + |δ_t a₂′| + |U₀²a₂|)
/// of a candidate solution of the second-order equation for a₂.
pub fn residual_eq3(a2: Complex64, a2_d1: Complex64, a2_d2: Complex64, t: f64, cfg: &FieldConfig) -> Result<f64> {
    let det = detuning(t, cfg)?;
    let u2 = cfg.u0() * cfg.u0();
    let value = a2_d2 - I * det * a2_d1 + u2 * a2;
    let size = a2_d2.norm() + (det * a2_d1).norm() + (u2 * a2).norm();
    if size == 0.0 {
        return Ok(0.0);
    }
    Ok(value.norm() / size)
}
