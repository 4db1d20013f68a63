//! Closed-form solutions of a₂″ − iδ_t a₂′ + U₀²a₂ = 0 and the scattering
//! quantities built from them.
//!
//! Both solution representations share the shape
//! e^{p₁√t + p₂t}(h₀H_ν(x) + h₁H_{ν−1}(x)) with x linear in √t, so values and
//! t-derivatives are evaluated analytically from H_ν, H_{ν−1}, H_{ν−2}.

mod fundamental;
mod scattering;
mod solution;

pub use fundamental::{
    a2_fundamental_hermite, a2_fundamental_hermite_jet, a2_fundamental_quasienergy, a2_fundamental_quasienergy_jet,
    branch_pairing, fundamental_params, fundamental_params_with, ratio_spread, AlphaBranch, BranchPairing,
    FundamentalParams, PairedBranch, QuasiBranch, Sign, TimeJet, PAIRING_SAMPLE_TIMES,
};
pub use scattering::{
    approx_strong_field, approx_weak_field, asymptote_remainder, lambda1_asymptote, lambda2_asymptote,
    scattering_a2_at_zero, Lambda2Prefactor, ScatteringAtZero,
};
pub use solution::{
    a1_from_a2, a2_general, a2_general_jet, limit_a1_at_zero, rabi_solution, solve_ivp_coefficients,
    solve_ivp_coefficients_unnormalized, AmplitudePair, AnalyticSolution, SolutionCoefficients,
};
