//! Independent recomputation of the order variance by conditioning on the
//! lead-time history (law of total variance), used as a second analytic path
//! that must agree with the closed form in `analytics`.
//!
//! Conditional on the lead times, the order is a linear combination of one
//! lagged demand state (coefficient `C1`) and the `n` most recent demand
//! innovations (coefficients `C2_k`), so
//!
//! ```text
//! Var q = Var(E[q | leads]) + sigma_D^2 E[C1^2] + sigma_eps^2 sum_k E[C2_k^2]
//! ```
//!
//! Each expectation below is a closed form over the lead-time moments; the
//! unit tests also rebuild them by exhaustive enumeration of two-point
//! lead-time tuples straight from the coefficient definitions.
//!
//! Accuracy note: these expressions keep their raw `(1 - rho)` denominators,
//! so evaluate them at |rho| <= 0.99; the seam logic lives in `analytics`.

use crate::analytics::BmInputs;

/// Variance of the conditional mean `E[q | leads]`: only the change in the
/// lead-time forecast moves it, giving `2 sigma_L^2 mu_D^2 / m^2`.
pub fn var_of_conditional_mean(inputs: &BmInputs) -> f64 {
    let mf = inputs.m() as f64;
    let mu_d = inputs.demand().mu_d();
    2.0 * inputs.sigma_l2() * mu_d * mu_d / (mf * mf)
}

/// `E[C1^2]` for the coefficient on the lagged demand state, assembled as
/// `Var C1 + (E C1)^2`.
pub fn mean_sq_demand_state_coeff(inputs: &BmInputs) -> f64 {
    let rho = inputs.demand().rho();
    let nf = inputs.n() as f64;
    let mf = inputs.m() as f64;
    let rho_n = rho.powi(inputs.n() as i32);
    let mu_l = inputs.mu_l();

    let mean_c1 = (mu_l / nf + 1.0) * rho_n - mu_l / nf;
    let one_minus = 1.0 - rho;
    let var_c1 = (1.0 - rho_n) * (1.0 - rho_n) * inputs.sigma_l2()
        * (mf + 2.0 * rho / (one_minus * one_minus))
        / (nf * nf * mf * mf);
    var_c1 + mean_c1 * mean_c1
}

/// `sum_k E[C2_k^2]` over the `n` innovation coefficients, written as the
/// geometric `rho^2`-sum, the `rho`-sum, and the constant term.
pub fn sum_mean_sq_innovation_coeffs(inputs: &BmInputs) -> f64 {
    let rho = inputs.demand().rho();
    let n = inputs.n();
    let nf = n as f64;
    let mf = inputs.m() as f64;
    let sl2 = inputs.sigma_l2();
    let mu_l = inputs.mu_l();

    let rho_n = rho.powi(n as i32);
    let rho_2n = rho_n * rho_n;
    let one_minus = 1.0 - rho;
    let om2 = one_minus * one_minus;
    let n2m2 = nf * nf * mf * mf;

    let sq_group = (sl2 * (mf - 1.0) / n2m2
        + (mu_l / nf + 1.0) * (mu_l / nf + 1.0)
        + sl2 * (rho * rho + 1.0) / (n2m2 * om2))
        * (1.0 - rho_2n)
        / (1.0 - rho * rho);
    let cross_group = 2.0 * sl2 * (rho + 1.0) / (n2m2 * om2) * (1.0 - rho_n) / one_minus;
    let constant_group = 2.0 * sl2 / (nf * mf * mf * om2);
    sq_group - cross_group + constant_group
}

/// The full order variance assembled from the three pieces.
pub fn var_order_decomposed(inputs: &BmInputs) -> f64 {
    let d = inputs.demand();
    let sigma_eps2 = d.sigma_eps() * d.sigma_eps();
    var_of_conditional_mean(inputs)
        + d.var_d() * mean_sq_demand_state_coeff(inputs)
        + sigma_eps2 * sum_mean_sq_innovation_coeffs(inputs)
}

/// All three pieces plus their assembly, for reporting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarianceDecomposition {
    pub var_of_conditional_mean: f64,
    pub mean_sq_demand_state_coeff: f64,
    pub sum_mean_sq_innovation_coeffs: f64,
    pub var_order: f64,
}

pub fn decomposition_terms(inputs: &BmInputs) -> VarianceDecomposition {
    VarianceDecomposition {
        var_of_conditional_mean: var_of_conditional_mean(inputs),
        mean_sq_demand_state_coeff: mean_sq_demand_state_coeff(inputs),
        sum_mean_sq_innovation_coeffs: sum_mean_sq_innovation_coeffs(inputs),
        var_order: var_order_decomposed(inputs),
    }
}
