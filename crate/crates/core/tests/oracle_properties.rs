use ivsqrt::closed_form::{AmplitudePair, AnalyticSolution};
use ivsqrt::field::{quasi_energies, FieldConfig};
use ivsqrt::oracle::{
    integrate_two_state, integrate_two_state_in_t, integrate_two_state_unnormalized, IntegrationSpec,
};
use ivsqrt::EvalPolicy;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_configs(n: usize, seed: u64) -> Vec<FieldConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let d1: f64 = rng.random_range(0.1..6.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            FieldConfig::new(rng.random_range(0.3..3.0), rng.random_range(1.0..6.0), d1).unwrap()
        })
        .collect()
}

#[test]
fn norm_drift_is_bounded() {
    for cfg in random_configs(20, 11) {
        let spec = IntegrationSpec::uniform(0.0, 20.0, 1.0);
        let init = AmplitudePair::new(c(0.6, 0.0), c(0.0, 0.8));
        let tr = integrate_two_state(&cfg, &init, &spec).unwrap();
        assert!(tr.norm_drift <= 10.0 * spec.rel_tol, "{}", tr.norm_drift);
        assert_eq!(tr.times, spec.output_grid);
        assert_eq!(tr.states.len(), spec.output_grid.len());
    }
}

#[test]
fn refinement_stays_within_error_estimate() {
    for cfg in random_configs(5, 12) {
        let init = AmplitudePair::new(c(1.0, 0.0), c(0.0, 0.0));
        let coarse = IntegrationSpec::new(0.0, 10.0, vec![10.0]).with_tolerances(1e-8, 1e-10);
        let fine = coarse.clone().with_tolerances(5e-9, 5e-11);
        let a = integrate_two_state(&cfg, &init, &coarse).unwrap();
        let b = integrate_two_state(&cfg, &init, &fine).unwrap();
        let diff = (a.states[0].a1 - b.states[0].a1)
            .norm()
            .max((a.states[0].a2 - b.states[0].a2).norm());
        assert!(diff < a.error_estimate, "{diff} vs {}", a.error_estimate);
    }
}

#[test]
fn superposition() {
    let cfg = FieldConfig::new(1.0, 4.0, -5.0).unwrap();
    let spec = IntegrationSpec::uniform(0.0, 10.0, 0.5);
    let x = AmplitudePair::new(c(0.6, 0.0), c(0.0, 0.8));
    let y = AmplitudePair::new(c(0.3, 0.1), c(-0.5, 0.0));
    let tx = integrate_two_state_unnormalized(&cfg, &x, &spec).unwrap();
    let ty = integrate_two_state_unnormalized(&cfg, &y, &spec).unwrap();
    let txy = integrate_two_state_unnormalized(&cfg, &(x + y), &spec).unwrap();
    for ((a, b), s) in tx.states.iter().zip(&ty.states).zip(&txy.states) {
        assert!((a.a1 + b.a1 - s.a1).norm() <= 1e-9);
        assert!((a.a2 + b.a2 - s.a2).norm() <= 1e-9);
    }
}

#[test]
fn raw_time_agrees_with_square_root_variable() {
    let cfg = FieldConfig::new(1.0, 4.0, -5.0).unwrap();
    let init = AmplitudePair::new(c(1.0, 0.0), c(0.0, 0.0));
    let s_form = integrate_two_state(&cfg, &init, &IntegrationSpec::new(0.0, 1.0, vec![1e-6, 1.0])).unwrap();
    let start = s_form.states[0];
    let t_form = integrate_two_state_in_t(&cfg, &start, &IntegrationSpec::new(1e-6, 1.0, vec![1.0])).unwrap();
    assert!((t_form.states[0].a1 - s_form.states[1].a1).norm() <= 1e-7);
    assert!((t_form.states[0].a2 - s_form.states[1].a2).norm() <= 1e-7);
}

#[test]
fn analytic_fig1_trajectory() {
    let cfg = FieldConfig::new(1.0, 4.0, -5.0).unwrap();
    let p = EvalPolicy::default();
    for init in [
        AmplitudePair::new(c(1.0, 0.0), c(0.0, 0.0)),
        AmplitudePair::new(c(0.0, 0.0), c(1.0, 0.0)),
        AmplitudePair::new(c(0.6, 0.0), c(0.0, -0.8)),
    ] {
        let spec = IntegrationSpec::uniform(0.0, 20.0, 0.25);
        let tr = integrate_two_state(&cfg, &init, &spec).unwrap();
        let sol = AnalyticSolution::from_initial(&init, &cfg, &p).unwrap();
        for (t, s) in tr.times.iter().zip(&tr.states) {
            let a = sol.at(*t).unwrap();
            assert!((a.a1 - s.a1).norm() <= 1e-6 && (a.a2 - s.a2).norm() <= 1e-6, "t = {t}");
        }
    }
}

#[test]
fn phase_stripped_integration_reaches_large_times() {
    // the pure λ₁ state starts from its closed-form value at t = 100
    let cfg = FieldConfig::new(1.0, 4.0, -5.0).unwrap();
    let p = EvalPolicy::default();
    let lambda1 = quasi_energies(&cfg).lambda1;
    let sol = AnalyticSolution {
        cfg,
        coeffs: ivsqrt::closed_form::SolutionCoefficients::new(c(1.0, 0.0), c(0.0, 0.0)),
        policy: p,
    };
    let start = sol.at(100.0).unwrap();
    let lab = IntegrationSpec::new(100.0, 3000.0, vec![1000.0, 3000.0]);
    let spec = lab.clone().with_frame(lambda1);
    let tr = integrate_two_state_unnormalized(&cfg, &start, &spec).unwrap();
    let lab_steps = integrate_two_state_unnormalized(&cfg, &start, &lab).unwrap().steps;
    assert!(tr.steps * 4 < lab_steps, "{} vs {} steps", tr.steps, lab_steps);
    for (t, s) in tr.times.iter().zip(&tr.states) {
        let a = sol.at(*t).unwrap();
        assert!((a.a2 - s.a2).norm() <= 1e-6 * a.a2.norm(), "t = {t}");
    }
}
