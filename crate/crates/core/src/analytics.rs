//! Closed-form order-variance amplification (bullwhip) for the order-up-to
//! policy under AR(1) demand and iid random lead times, with both demand and
//! lead time forecast by moving averages.
//!
//! The headline quantity is `Var(order) / Var(demand)`. It decomposes into
//! three nonnegative summands plus 1:
//!
//! * a lead-time variability term coupling `sigma_L^2` with both forecast
//!   windows and the demand autocorrelation,
//! * a lead-time forecast term `2 sigma_L^2 mu_D^2 / (sigma_D^2 m^2)` that
//!   survives even infinitely long demand windows,
//! * a demand forecast term `(2 mu_L^2 / n^2 + 2 mu_L / n)(1 - rho^n)` that
//!   survives even infinitely long lead-time windows.
//!
//! Every function here is pure arithmetic on validated inputs; the Monte
//! Carlo machinery in `experiments` exists to confirm these expressions.

use crate::error::{Error, Result};
use crate::stochastic::{DemandParams, LeadTimeDist};

/// Autocorrelations closer than this to +1 or -1 are evaluated through the
/// corresponding limit expression instead of the direct formula, whose
/// `(1 - rho)` denominators lose all precision there.
pub const RHO_SEAM: f64 = 1e-9;

/// Everything the closed forms need: the demand process, the first two
/// lead-time moments, and the two forecast window lengths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BmInputs {
    demand: DemandParams,
    mu_l: f64,
    sigma_l2: f64,
    n: u32,
    m: u32,
}

impl BmInputs {
    pub fn new(demand: DemandParams, mu_l: f64, sigma_l2: f64, n: u32, m: u32) -> Result<Self> {
        if !mu_l.is_finite() || mu_l < 0.0 {
            return Err(Error::InvalidParameter(format!("mu_l must be finite and >= 0, got {mu_l}")));
        }
        if !sigma_l2.is_finite() || sigma_l2 < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma_l2 must be finite and >= 0, got {sigma_l2}"
            )));
        }
        if n == 0 || m == 0 {
            return Err(Error::InvalidParameter(format!("window lengths must be >= 1, got n={n}, m={m}")));
        }
        Ok(Self { demand, mu_l, sigma_l2, n, m })
    }

    /// Takes the lead-time moments from a concrete distribution.
    pub fn from_dist(demand: DemandParams, dist: &LeadTimeDist, n: u32, m: u32) -> Result<Self> {
        Self::new(demand, dist.mean(), dist.variance(), n, m)
    }

    /// Same inputs with a different demand autocorrelation (stationary sd
    /// held fixed).
    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Ok(Self { demand: self.demand.with_rho(rho)?, ..*self })
    }

    pub fn demand(&self) -> &DemandParams {
        &self.demand
    }

    pub fn mu_l(&self) -> f64 {
        self.mu_l
    }

    pub fn sigma_l2(&self) -> f64 {
        self.sigma_l2
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

/// The amplification ratio and its three summands (`value` is their sum
/// plus 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BmResult {
    /// `Var(order) / Var(demand)`.
    pub value: f64,
    /// Lead-time variability interacting with both forecasts.
    pub leadtime_variability_term: f64,
    /// `2 sigma_L^2 mu_D^2 / (sigma_D^2 m^2)`: the price of forecasting the
    /// lead time at all.
    pub leadtime_forecast_term: f64,
    /// `(2 mu_L^2/n^2 + 2 mu_L/n)(1 - rho^n)`: the price of forecasting
    /// demand over a positive lead time.
    pub demand_forecast_term: f64,
}

impl BmResult {
    /// The three summands in documentation order.
    pub fn components(&self) -> [f64; 3] {
        [self.leadtime_variability_term, self.leadtime_forecast_term, self.demand_forecast_term]
    }
}

/// Shared by the random and constant lead-time forms so the degenerate case
/// agrees bitwise.
fn demand_window_term(mu_l: f64, n: u32, rho_pow_n: f64) -> f64 {
    let nf = n as f64;
    (2.0 * mu_l * mu_l / (nf * nf) + 2.0 * mu_l / nf) * (1.0 - rho_pow_n)
}

fn leadtime_forecast_term(inputs: &BmInputs) -> f64 {
    let mf = inputs.m as f64;
    let d = inputs.demand();
    2.0 * inputs.sigma_l2 * d.mu_d() * d.mu_d() / (d.var_d() * mf * mf)
}

/// Order-variance amplification of the order-up-to policy, with the three
/// summands exposed. Within [`RHO_SEAM`] of `rho = 1` or `rho = -1` the
/// limit expressions take over.
pub fn bm_analytic(inputs: &BmInputs) -> BmResult {
    let rho = inputs.demand().rho();
    let n = inputs.n;
    let m = inputs.m;
    let nf = n as f64;
    let mf = m as f64;
    let sl2 = inputs.sigma_l2;
    let mu_l = inputs.mu_l;

    let c2 = leadtime_forecast_term(inputs);

    if (1.0 - rho).abs() < RHO_SEAM {
        let c1 = 2.0 * sl2 / (mf * mf);
        return assemble(c1, c2, 0.0);
    }
    if (1.0 + rho).abs() < RHO_SEAM {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let c1 = sl2 * (1.0 - sign) * (2.0 * mf - 1.0) / (nf * nf * mf * mf);
        let c3 = demand_window_term(mu_l, n, sign);
        return assemble(c1, c2, c3);
    }

    let rho_n = rho.powi(n as i32);
    let one_minus = 1.0 - rho;
    let bracket = mf * (1.0 - rho_n) + nf * (1.0 + rho) / one_minus
        - (1.0 + rho * rho) * (1.0 - rho_n) / (one_minus * one_minus);
    let c1 = 2.0 * sl2 / (nf * nf * mf * mf) * bracket;
    let c3 = demand_window_term(mu_l, n, rho_n);
    assemble(c1, c2, c3)
}

fn assemble(c1: f64, c2: f64, c3: f64) -> BmResult {
    BmResult {
        value: c1 + c2 + c3 + 1.0,
        leadtime_variability_term: c1,
        leadtime_forecast_term: c2,
        demand_forecast_term: c3,
    }
}

/// Amplification when the lead time is a known constant `l`; only the demand
/// forecast contributes.
pub fn bm_constant_leadtime(l: u32, n: u32, rho: f64) -> Result<f64> {
    if !rho.is_finite() || rho.abs() >= 1.0 {
        return Err(Error::Domain(format!("rho must satisfy |rho| < 1 strictly, got {rho}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("demand window n must be >= 1".into()));
    }
    Ok(demand_window_term(l as f64, n, rho.powi(n as i32)) + 1.0)
}

/// Limit for an infinitely long demand window: only lead-time forecasting
/// still amplifies.
pub fn bm_limit_n_inf(inputs: &BmInputs) -> f64 {
    leadtime_forecast_term(inputs) + 1.0
}

/// Limit for an infinitely long lead-time window: only demand forecasting
/// still amplifies.
pub fn bm_limit_m_inf(inputs: &BmInputs) -> f64 {
    let rho = inputs.demand().rho();
    demand_window_term(inputs.mu_l, inputs.n, rho.powi(inputs.n as i32)) + 1.0
}

/// Both windows infinitely long: amplification vanishes entirely.
pub fn bm_limit_nm_inf() -> f64 {
    1.0
}

/// Amplification for the naive demand forecast `n = 1`, where the measure is
/// exactly linear in `rho` with non-positive slope. Misuse with `n != 1` is
/// an error.
pub fn bm_n1(inputs: &BmInputs) -> Result<f64> {
    if inputs.n != 1 {
        return Err(Error::InvalidParameter(format!(
            "this form is specific to n = 1, got n = {}",
            inputs.n
        )));
    }
    let d = inputs.demand();
    let rho = d.rho();
    let mf = inputs.m as f64;
    let mu_l = inputs.mu_l;
    let sl2 = inputs.sigma_l2;
    let sd2 = d.var_d();
    let sd4 = sd2 * sd2;
    let mu_d2 = d.mu_d() * d.mu_d();
    let numer = rho * 2.0 * sd4 * (sl2 - mf * (mf * mu_l * (mu_l + 1.0) + sl2))
        + 2.0 * mu_d2 * sd2 * sl2
        + mf * sd4 * (2.0 * mf * mu_l * (mu_l + 1.0) + 2.0 * sl2 + mf);
    Ok(numer / (mf * mf * sd4))
}

/// Amplification for iid demand (`rho = 0`), the form that isolates each
/// window's contribution.
pub fn bm_iid(inputs: &BmInputs) -> f64 {
    let nf = inputs.n as f64;
    let mf = inputs.m as f64;
    let sl2 = inputs.sigma_l2;
    let mu_l = inputs.mu_l;
    1.0 + leadtime_forecast_term(inputs)
        + 2.0 * sl2 * (mf + nf - 1.0) / (mf * mf * nf * nf)
        + 2.0 * mu_l * (mu_l + nf) / (nf * nf)
}

/// Slope of the amplification in `rho` at `rho = 0`:
/// `4 (n-1) sigma_L^2 / (m^2 n^2)`. Nonnegative, and strictly positive for
/// `n > 1` with random lead times; meaningful only for `n >= 2` (the measure
/// is not differentiable-from-this-form at `n = 1`, where it is globally
/// linear with a different slope).
pub fn dbm_drho_at_zero(inputs: &BmInputs) -> f64 {
    let nf = inputs.n as f64;
    let mf = inputs.m as f64;
    4.0 * (nf - 1.0) * inputs.sigma_l2 / (mf * mf * nf * nf)
}

/// Limit of the amplification as `rho -> 1`: independent of `n`, decreasing
/// in `m`.
pub fn bm_rho_to_1(inputs: &BmInputs) -> f64 {
    let mf = inputs.m as f64;
    let d = inputs.demand();
    1.0 + 2.0 * inputs.sigma_l2 * (d.mu_d() * d.mu_d() + d.var_d()) / (mf * mf * d.var_d())
}

/// Limit as `rho -> -1`, which depends on the parity of `n`.
pub fn bm_rho_to_minus1(inputs: &BmInputs) -> f64 {
    let nf = inputs.n as f64;
    let mf = inputs.m as f64;
    let sign = if inputs.n % 2 == 0 { 1.0 } else { -1.0 };
    1.0 + leadtime_forecast_term(inputs)
        + inputs.sigma_l2 * (1.0 - sign) * (2.0 * mf - 1.0) / (nf * nf * mf * mf)
        + demand_window_term(inputs.mu_l, inputs.n, sign)
}

/// `rho -> -1` limit for even `n`: the oscillation cancels inside both
/// windows and only lead-time forecasting remains.
pub fn bm_rho_to_minus1_even(inputs: &BmInputs) -> f64 {
    1.0 + leadtime_forecast_term(inputs)
}

/// `rho -> -1` limit for odd `n`: the surviving oscillation doubles the
/// demand-window terms.
pub fn bm_rho_to_minus1_odd(inputs: &BmInputs) -> f64 {
    let nf = inputs.n as f64;
    let mf = inputs.m as f64;
    let mu_l = inputs.mu_l;
    1.0 + leadtime_forecast_term(inputs)
        + 2.0 * inputs.sigma_l2 * (2.0 * mf - 1.0) / (nf * nf * mf * mf)
        + 4.0 * mu_l * (mu_l + nf) / (nf * nf)
}

/// Sufficient (not necessary) conditions for an interior stationary point of
/// the amplification as a function of `rho`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StationaryPointReport {
    /// Largest demand window for which a stationary point in `(0, 1)` is
    /// guaranteed: the slope at 0 is positive while the `rho -> 1` limit sits
    /// below the iid value whenever `2 <= n <= n_upper_bound`. Infinite when
    /// the lead time is constant.
    pub n_upper_bound: f64,
    /// Smallest lead-time window for which a stationary point in `(-1, 0)`
    /// is guaranteed for odd `n > 1`: the slope at 0 is positive (moving
    /// left decreases BM initially... the measure rises again towards the
    /// odd-parity limit) whenever `m >= m_lower_bound`.
    pub m_lower_bound: f64,
    /// Stationary point guaranteed somewhere in `(0, 1)`.
    pub positive_region_sufficient: bool,
    /// Stationary point guaranteed somewhere in `(-1, 0)`.
    pub negative_region_sufficient: bool,
}

/// Evaluates both sufficiency conditions. With a constant lead time
/// (`sigma_l2 = 0`) the slope at 0 vanishes, the sufficiency argument does
/// not apply, and both flags are false even though the iid value still
/// exceeds the `rho -> 1` limit; the bounds are reported as the appropriate
/// degenerate limits.
pub fn stationary_point_conditions(inputs: &BmInputs) -> StationaryPointReport {
    let nf = inputs.n as f64;
    let mf = inputs.m as f64;
    let sl2 = inputs.sigma_l2;
    let sl = sl2.sqrt();
    let mu_l = inputs.mu_l;

    let n_upper_bound = if sl2 > 0.0 {
        let a = sl2 + mf * mf * mu_l;
        (a + (a * a + 4.0 * sl2 * (sl2 * (mf - 1.0) + mf * mf * mu_l * mu_l)).sqrt()) / (2.0 * sl2)
    } else {
        f64::INFINITY
    };

    let m_lower_bound = if mu_l > 0.0 {
        (sl * (sl2 + 4.0 * nf * mu_l * (mu_l + nf)).sqrt() - sl2) / (2.0 * mu_l * (mu_l + nf))
    } else if sl2 > 0.0 {
        // mu_l -> 0 limit of the expression above.
        nf
    } else {
        0.0
    };

    let positive_region_sufficient = sl2 > 0.0 && inputs.n >= 2 && nf <= n_upper_bound;
    let negative_region_sufficient =
        sl2 > 0.0 && inputs.n > 1 && inputs.n % 2 == 1 && mf >= m_lower_bound;

    StationaryPointReport { n_upper_bound, m_lower_bound, positive_region_sufficient, negative_region_sufficient }
}
