//! TOML-backed run configuration.
//!
//! Every field is optional so that a config file, command-line flags, and a
//! preset can each contribute a part. Flags override file values, and both
//! override preset values. Runs embed their fully resolved configuration as
//! `#`-prefixed header lines in CSV output; stripping the prefix yields a
//! config file that reproduces the run.

use std::path::PathBuf;

use anyhow::Context;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Scenario preset name: `fig3`..`fig10`, or `paper` for all eight.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Mean demand per period.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_d: Option<f64>,
    /// Stationary demand standard deviation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_d: Option<f64>,
    /// Demand autocorrelation, strictly inside (-1, 1).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// Mean lead time.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_l: Option<f64>,
    /// Lead-time standard deviation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_l: Option<f64>,
    /// Demand-forecast window length (periods).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Lead-time-forecast window length (periods).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// Explicit lead-time pmf as `[[value, probability], ...]`; when absent,
    /// simulation commands use the two-point distribution matching
    /// `mu_l`/`sigma_l`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lead_time_pmf: Option<Vec<(u32, f64)>>,
    /// RNG seed for anything stochastic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Measured periods per run or replication.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periods: Option<usize>,
    /// Monte Carlo replications.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replications: Option<usize>,
    /// Simulation burn-in periods (defaults to a multiple of the window
    /// lengths).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    /// Target net stock for the simulated policy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tns: Option<f64>,
    /// Unit holding cost per period (with `backlog_cost`, enables the
    /// empirical target-net-stock estimate).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holding_cost: Option<f64>,
    /// Unit backlog cost per period.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backlog_cost: Option<f64>,
    /// Lower end of the autocorrelation grid (sweep) or search region
    /// (extrema).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_min: Option<f64>,
    /// Upper end of the autocorrelation grid or search region.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_max: Option<f64>,
    /// Number of evenly spaced sweep grid points.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_points: Option<usize>,
    /// Attach Monte Carlo estimates to every sweep point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub with_mc: Option<bool>,
    /// When true (default), `sigma_d` is the stationary demand sd held fixed
    /// across a sweep; when false it is the innovation sd.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hold_sigma_d_constant: Option<bool>,
    /// Output CSV path.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        toml::from_str(text).context("invalid configuration")
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("a run configuration always serializes")
    }

    /// Fills every hole in `self` from `lower`; `self` wins where both are
    /// set.
    pub fn merge(self, lower: RunConfig) -> RunConfig {
        RunConfig {
            preset: self.preset.or(lower.preset),
            mu_d: self.mu_d.or(lower.mu_d),
            sigma_d: self.sigma_d.or(lower.sigma_d),
            rho: self.rho.or(lower.rho),
            mu_l: self.mu_l.or(lower.mu_l),
            sigma_l: self.sigma_l.or(lower.sigma_l),
            n: self.n.or(lower.n),
            m: self.m.or(lower.m),
            lead_time_pmf: self.lead_time_pmf.or(lower.lead_time_pmf),
            seed: self.seed.or(lower.seed),
            periods: self.periods.or(lower.periods),
            replications: self.replications.or(lower.replications),
            burn_in: self.burn_in.or(lower.burn_in),
            tns: self.tns.or(lower.tns),
            holding_cost: self.holding_cost.or(lower.holding_cost),
            backlog_cost: self.backlog_cost.or(lower.backlog_cost),
            rho_min: self.rho_min.or(lower.rho_min),
            rho_max: self.rho_max.or(lower.rho_max),
            rho_points: self.rho_points.or(lower.rho_points),
            with_mc: self.with_mc.or(lower.with_mc),
            hold_sigma_d_constant: self.hold_sigma_d_constant.or(lower.hold_sigma_d_constant),
            out: self.out.or(lower.out),
        }
    }
}
