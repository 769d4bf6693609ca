//! Exact formulas, chain machinery, and Monte Carlo estimators for the
//! two critical values and the growth rate.

pub mod bisect;
pub mod chain;
pub mod closed_form;
pub mod estimate;
pub mod growth;

pub use bisect::{
    bisect_critical, BisectConfig, BisectOutcome, BisectPoint, Decision, PhaseClassifier,
};
pub use chain::{
    chain_analysis, chain_coefficients, chain_f_limit, chain_kernel, chain_theta1, chain_theta2,
    lambda2_brw_lower_bound, lambda2_brw_lower_bound_with_hi, ChainAnalysis,
};
pub use closed_form::{
    comb_brw_critical, level_matrix_eigenvalue, limiting_quadratic_root, solve_quadratic,
    strong_survival_boundary_lambda,
};
pub use estimate::{
    estimate_return_probability, estimate_return_probability_process,
    estimate_survival_probability, estimate_survival_probability_process, Estimate,
};
pub use growth::{
    estimate_growth_rate, GrowthConfig, GrowthRateEstimate, GrowthSamples, ProcessKind,
};
