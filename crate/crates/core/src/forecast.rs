//! Moving-average forecasts for demand, lead time, and lead-time demand.
//!
//! The lead-time window is shifted back by the lead-time bound `l_plus` so
//! that every lead time inside it has already been observed: an order placed
//! at `s` reveals its lead time no later than `s + l_plus`, so at period `t`
//! the most recent certainly-known lead time is `L_{t-1-l_plus}`.

use crate::error::{Error, Result};

/// Window lengths for the two moving averages plus the lead-time bound that
/// determines how far back the lead-time window sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ForecastConfig {
    n: usize,
    m: usize,
    l_plus: u32,
}

impl ForecastConfig {
    /// `n` demand observations, `m` lead-time observations, lead times
    /// bounded by `l_plus`. Both windows must be nonempty.
    pub fn new(n: usize, m: usize, l_plus: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("demand window n must be >= 1".into()));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("lead-time window m must be >= 1".into()));
        }
        Ok(Self { n, m, l_plus })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l_plus(&self) -> u32 {
        self.l_plus
    }

    /// First period with full history for both forecasts: the demand window
    /// needs `n` observations and the lagged lead-time window needs
    /// `m + l_plus`.
    pub fn first_forecastable(&self) -> usize {
        self.n.max(self.m + self.l_plus as usize)
    }
}

/// Mean of the `n` demands before `t`: `mean(history[t-n ..= t-1])`.
pub fn ma_demand_forecast(history: &[f64], t: usize, cfg: &ForecastConfig) -> Result<f64> {
    let n = cfg.n;
    if t < n || t > history.len() {
        return Err(Error::OutOfHistory {
            t,
            lo: t as i64 - n as i64,
            hi: t as i64 - 1,
            len: history.len(),
        });
    }
    Ok(history[t - n..t].iter().sum::<f64>() / n as f64)
}

/// Mean of the `m` observed lead times ending at `t - 1 - l_plus`:
/// `mean(history[t-m-l_plus ..= t-1-l_plus])`.
pub fn ma_leadtime_forecast(history: &[u32], t: usize, cfg: &ForecastConfig) -> Result<f64> {
    let m = cfg.m;
    let lag = cfg.l_plus as usize;
    if t < m + lag || t - lag > history.len() {
        return Err(Error::OutOfHistory {
            t,
            lo: t as i64 - (m + lag) as i64,
            hi: t as i64 - 1 - lag as i64,
            len: history.len(),
        });
    }
    let window = &history[t - m - lag..t - lag];
    Ok(window.iter().map(|&l| l as u64).sum::<u64>() as f64 / m as f64)
}

/// Lead-time demand forecast: the product of the two per-period forecasts.
/// The lead-time forecast must be nonnegative; demand forecasts may be
/// negative (the demand process is unbounded below).
pub fn ltd_forecast(demand_forecast: f64, leadtime_forecast: f64) -> Result<f64> {
    if !leadtime_forecast.is_finite() || leadtime_forecast < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "lead-time forecast must be finite and >= 0, got {leadtime_forecast}"
        )));
    }
    Ok(demand_forecast * leadtime_forecast)
}
