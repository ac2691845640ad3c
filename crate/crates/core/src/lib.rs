//! Order-variance amplification (bullwhip) analysis for an order-up-to
//! replenishment policy facing AR(1) demand and random, bounded lead times,
//! with both demand and lead time forecast by moving averages.
//!
//! The crate offers three mutually checking routes to the same quantity
//! `Var(order) / Var(demand)`:
//!
//! * [`analytics`]: the closed form with its three summands, plus special
//!   cases (iid demand, naive forecasts, window limits, `rho -> +-1`) and
//!   stationary-point conditions;
//! * [`decomposition`]: an independent law-of-total-variance assembly of the
//!   order variance;
//! * [`policy`] + [`experiments`]: a faithful discrete-time simulation of
//!   the policy (random lead times, order crossover, negative orders) and a
//!   Monte Carlo harness with z-scored validation reports.
//!
//! [`presets`] carries the eight built-in benchmark scenarios, and
//! [`stochastic`]/[`forecast`] the underlying generators and moving-average
//! forecasts.

pub mod analytics;
pub mod decomposition;
pub mod error;
pub mod experiments;
pub mod forecast;
pub mod policy;
pub mod presets;
pub mod stats;
pub mod stochastic;

pub use analytics::{bm_analytic, BmInputs, BmResult};
pub use error::{Error, Result};
pub use experiments::{estimate_bm_mc, McEstimate, McSettings};
pub use forecast::ForecastConfig;
pub use policy::{run_out_policy, SimTrace};
pub use stochastic::{DemandParams, LeadTimeDist, SeededStream};
