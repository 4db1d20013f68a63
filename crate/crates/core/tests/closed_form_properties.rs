use ivsqrt::closed_form::{
    a2_fundamental_hermite_jet, a2_fundamental_quasienergy, a2_fundamental_quasienergy_jet, branch_pairing,
    fundamental_params, scattering_a2_at_zero, AmplitudePair, AnalyticSolution, QuasiBranch, Sign,
};
use ivsqrt::field::{c1_normalization, phase, FieldConfig};
use ivsqrt::oracle::residual_eq3;
use ivsqrt::EvalPolicy;
use num_complex::Complex64;
use proptest::prelude::*;

fn config() -> impl Strategy<Value = FieldConfig> {
    (0.3f64..3.0, 1.0f64..6.0, 0.1f64..6.0, any::<bool>())
        .prop_map(|(u0, d0, d1, neg)| FieldConfig::new(u0, d0, if neg { -d1 } else { d1 }).unwrap())
}

fn state() -> impl Strategy<Value = AmplitudePair> {
    (0.0f64..std::f64::consts::FRAC_PI_2, -3.2f64..3.2, -3.2f64..3.2).prop_map(|(theta, p1, p2)| {
        AmplitudePair::new(
            Complex64::from_polar(theta.cos(), p1),
            Complex64::from_polar(theta.sin(), p2),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn second_order_residual(cfg in config(), t in 0.001f64..20.0) {
        let p = EvalPolicy::default();
        for s in [Sign::Plus, Sign::Minus] {
            let jet = a2_fundamental_hermite_jet(t, &fundamental_params(&cfg, s).unwrap(), &p).unwrap();
            prop_assert!(residual_eq3(jet.value, jet.d1, jet.d2.unwrap(), t, &cfg).unwrap() <= 1e-8);
        }
        for b in [QuasiBranch::Lambda1, QuasiBranch::Lambda2] {
            let jet = a2_fundamental_quasienergy_jet(t, &cfg, b, &p).unwrap();
            prop_assert!(residual_eq3(jet.value, jet.d1, jet.d2.unwrap(), t, &cfg).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn representations_differ_by_constants(cfg in config()) {
        let pairing = branch_pairing(&cfg, &EvalPolicy::default()).unwrap();
        prop_assert!(pairing.lambda1.spread <= 1e-8);
        prop_assert!(pairing.lambda2.spread <= 1e-8);
    }

    #[test]
    fn wronskian_follows_liouville(cfg in config(), t in 0.5f64..5.0) {
        // W′ = iδ_t W, so W(t)e^{−iδ(t)} is constant
        let p = EvalPolicy::default();
        let w = |t: f64| {
            let f = a2_fundamental_quasienergy_jet(t, &cfg, QuasiBranch::Lambda1, &p).unwrap();
            let g = a2_fundamental_quasienergy_jet(t, &cfg, QuasiBranch::Lambda2, &p).unwrap();
            (f.value * g.d1 - g.value * f.d1) * Complex64::from_polar(1.0, -phase(t, &cfg).unwrap())
        };
        let (w0, wt) = (w(0.5), w(t));
        prop_assert!(w0.norm() > 1e-6);
        prop_assert!((wt - w0).norm() <= 1e-8 * w0.norm());
    }

    #[test]
    fn analytic_trajectories_conserve_probability(cfg in config(), init in state()) {
        let sol = AnalyticSolution::from_initial(&init, &cfg, &EvalPolicy::default()).unwrap();
        let start = sol.at(0.0).unwrap();
        prop_assert!((start.a1 - init.a1).norm() <= 1e-10);
        prop_assert!((start.a2 - init.a2).norm() <= 1e-10);
        for i in 0..=20 {
            let a = sol.at(i as f64).unwrap();
            prop_assert!((a.norm_sqr() - 1.0).abs() <= 1e-8);
        }
    }

    #[test]
    fn scattering_amplitude_is_lambda1_state(cfg in config()) {
        let p = EvalPolicy::default();
        let s = scattering_a2_at_zero(&cfg, &p).unwrap();
        let direct = c1_normalization(&cfg).unwrap() * a2_fundamental_quasienergy(0.0, &cfg, QuasiBranch::Lambda1, &p).unwrap();
        prop_assert!((s.a2 - direct).norm() <= 1e-10);
        prop_assert!(s.p2 > 0.0 && s.p2 < 1.0);
    }
}

#[test]
fn rabi_route_conserves_probability() {
    let cfg = FieldConfig::new(1.0, 4.0, 0.0).unwrap();
    let init = AmplitudePair::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
    let sol = AnalyticSolution::from_initial(&init, &cfg, &EvalPolicy::default()).unwrap();
    for i in 0..=40 {
        assert!((sol.at(0.5 * i as f64).unwrap().norm_sqr() - 1.0).abs() <= 1e-12);
    }
}
