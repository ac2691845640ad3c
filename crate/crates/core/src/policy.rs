//! Order-up-to replenishment simulation with random lead times and order
//! crossover.
//!
//! Orders are placed every period against a moving-average forecast of
//! lead-time demand; negative orders (returns) are allowed, and deliveries
//! arriving in the same period are summed regardless of placement order.
//! Two independent order computations are provided: the telescoped
//! difference of consecutive forecasts ([`run_out_policy`]) and the raw
//! inventory-position gap ([`orders_via_inventory_position`]); they agree to
//! floating-point precision.

use crate::error::{Error, Result};
use crate::forecast::ForecastConfig;
use crate::stats::sample_variance;

/// One placed order, with its realized lead time and arrival period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderRecord {
    pub placed_at: usize,
    pub quantity: f64,
    pub lead_time: u32,
    pub arrives_at: usize,
}

/// Linear holding and backlog cost rates per unit per period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostParams {
    h: f64,
    b: f64,
}

impl CostParams {
    pub fn new(h: f64, b: f64) -> Result<Self> {
        if !h.is_finite() || !b.is_finite() || h < 0.0 || b < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "cost rates must be finite and >= 0, got h={h}, b={b}"
            )));
        }
        if h + b <= 0.0 {
            return Err(Error::InvalidParameter("h + b must be > 0".into()));
        }
        Ok(Self { h, b })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Critical fractile `b / (b + h)`.
    pub fn fractile(&self) -> f64 {
        self.b / (self.b + self.h)
    }
}

/// Periods recorded by [`run_out_policy`]. All series share indexing:
/// entry `i` describes absolute period `start + i`, and the first `burn_in`
/// entries precede the measurement window.
#[derive(Clone, Debug)]
pub struct SimTrace {
    /// Absolute period of the first recorded entry.
    pub start: usize,
    /// Recorded entries to discard before measuring.
    pub burn_in: usize,
    /// Target net stock used for the order-up-to level.
    pub tns: f64,
    pub demand: Vec<f64>,
    pub lead_time: Vec<u32>,
    pub demand_forecast: Vec<f64>,
    pub leadtime_forecast: Vec<f64>,
    pub ltd_forecast: Vec<f64>,
    pub order: Vec<f64>,
    pub receipts: Vec<f64>,
    pub net_stock: Vec<f64>,
    /// Every order placed during the run plus the synthetic pipeline seeds,
    /// in placement order.
    pub records: Vec<OrderRecord>,
}

impl SimTrace {
    /// Entries inside the measurement window.
    pub fn measured(&self) -> usize {
        self.demand.len() - self.burn_in
    }

    fn measured_slice<'a, T>(&self, xs: &'a [T]) -> &'a [T] {
        &xs[self.burn_in..]
    }

    /// Ratio of order variance to demand variance over the measurement
    /// window.
    pub fn bm_estimate(&self) -> f64 {
        sample_variance(self.measured_slice(&self.order))
            / sample_variance(self.measured_slice(&self.demand))
    }

    /// Net-stock series inside the measurement window.
    pub fn measured_net_stock(&self) -> &[f64] {
        self.measured_slice(&self.net_stock)
    }

    /// Order series inside the measurement window.
    pub fn measured_orders(&self) -> &[f64] {
        self.measured_slice(&self.order)
    }

    /// Writes the trace as CSV with absolute period numbers.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "t,demand,lead_time,ltd_forecast,order,receipts,net_stock")?;
        for i in 0..self.demand.len() {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                self.start + i,
                self.demand[i],
                self.lead_time[i],
                self.ltd_forecast[i],
                self.order[i],
                self.receipts[i],
                self.net_stock[i],
            )?;
        }
        Ok(())
    }
}

/// Forecast series shared by both order computations.
struct PolicySetup {
    first: usize,
    ltd_fc: Vec<f64>,
    demand_fc: Vec<f64>,
    lead_fc: Vec<f64>,
    /// Deliveries by arrival period, pre-seeded with the synthetic pipeline.
    arrivals: Vec<f64>,
    seeds: Vec<OrderRecord>,
    on_order_first: f64,
    ns_before_first: f64,
}

/// Computes forecasts for `first-1 ..< t_total`, seeds the in-flight
/// pipeline, and fixes the initial net stock.
///
/// Pipeline fiction: each pre-history period `first - l_plus ..< first` is
/// assumed to have ordered the first demand forecast, with its realized lead
/// time deciding whether that order is still outstanding. Net stock before
/// `first` is set to the order-up-to level minus last demand minus what is
/// outstanding, which starts the system exactly at its fixed point: the
/// telescoped and inventory-position order paths coincide from the very
/// first period, and in a deterministic world the net stock holds at
/// `tns - mu_d` (the current period's demand falls outside the forecast
/// horizon of the order-up-to level).
fn prepare(demands: &[f64], leadtimes: &[u32], cfg: &ForecastConfig, tns: f64) -> Result<PolicySetup> {
    let t_total = demands.len();
    if leadtimes.len() != t_total {
        return Err(Error::Config(format!(
            "demand and lead-time series must have equal length, got {} and {}",
            t_total,
            leadtimes.len()
        )));
    }
    let n = cfg.n();
    let m = cfg.m();
    let l_plus = cfg.l_plus() as usize;
    if let Some(&bad) = leadtimes.iter().find(|&&l| l as usize > l_plus) {
        return Err(Error::InvalidParameter(format!(
            "lead time {bad} exceeds the declared bound {l_plus}"
        )));
    }
    let first = cfg.first_forecastable() + 1;
    if t_total < first + 2 {
        return Err(Error::Config(format!(
            "series of length {t_total} is too short: need at least {} periods to place two orders",
            first + 2
        )));
    }

    // Running-sum moving averages. The lead-time sum is integer arithmetic,
    // hence exact; the demand sum drifts by at most a few ulps per step,
    // which is far below the sampling noise of any estimate built from it.
    let mut demand_fc = vec![0.0; t_total];
    let mut lead_fc = vec![0.0; t_total];
    let mut ltd_fc = vec![0.0; t_total];
    let t0 = first - 1;
    let mut dsum: f64 = demands[t0 - n..t0].iter().sum();
    let mut lsum: u64 = leadtimes[t0 - m - l_plus..t0 - l_plus].iter().map(|&l| l as u64).sum();
    for t in t0..t_total {
        demand_fc[t] = dsum / n as f64;
        lead_fc[t] = lsum as f64 / m as f64;
        ltd_fc[t] = lead_fc[t] * demand_fc[t];
        if t + 1 < t_total {
            dsum += demands[t] - demands[t - n];
            lsum += leadtimes[t - l_plus] as u64;
            lsum -= leadtimes[t - m - l_plus] as u64;
        }
    }

    // Seed the pipeline: pre-history periods are assumed to have ordered the
    // first demand forecast each; drop seeds that would have arrived before
    // the simulation starts.
    let mut arrivals = vec![0.0; t_total + l_plus + 1];
    let mut seeds = Vec::new();
    let mut on_order_first = 0.0;
    let seed_qty = demand_fc[first];
    for s in first.saturating_sub(l_plus)..first {
        let arrives_at = s + leadtimes[s] as usize;
        if arrives_at >= first {
            arrivals[arrives_at] += seed_qty;
            on_order_first += seed_qty;
            seeds.push(OrderRecord { placed_at: s, quantity: seed_qty, lead_time: leadtimes[s], arrives_at });
        }
    }

    let order_up_to = ltd_fc[t0] + tns;
    let ns_before_first = order_up_to - demands[t0] - on_order_first;

    Ok(PolicySetup {
        first,
        ltd_fc,
        demand_fc,
        lead_fc,
        arrivals,
        seeds,
        on_order_first,
        ns_before_first,
    })
}

/// Simulates the order-up-to policy over the full horizon, recording periods
/// `first_forecastable + 1 ..< demands.len()`. The order each period is the
/// telescoped form `ltd_fc[t] - ltd_fc[t-1] + demand[t-1]`; receipts sum all
/// orders whose placement period plus realized lead time equals `t`.
pub fn run_out_policy(
    demands: &[f64],
    leadtimes: &[u32],
    cfg: &ForecastConfig,
    tns: f64,
    burn_in: usize,
) -> Result<SimTrace> {
    let mut setup = prepare(demands, leadtimes, cfg, tns)?;
    let t_total = demands.len();
    let first = setup.first;
    let recorded = t_total - first;
    if recorded < burn_in + 2 {
        return Err(Error::Config(format!(
            "burn-in {burn_in} leaves fewer than 2 of {recorded} recorded periods for measurement"
        )));
    }

    let mut trace = SimTrace {
        start: first,
        burn_in,
        tns,
        demand: Vec::with_capacity(recorded),
        lead_time: Vec::with_capacity(recorded),
        demand_forecast: Vec::with_capacity(recorded),
        leadtime_forecast: Vec::with_capacity(recorded),
        ltd_forecast: Vec::with_capacity(recorded),
        order: Vec::with_capacity(recorded),
        receipts: Vec::with_capacity(recorded),
        net_stock: Vec::with_capacity(recorded),
        records: std::mem::take(&mut setup.seeds),
    };

    let mut ns = setup.ns_before_first;
    for t in first..t_total {
        let q = setup.ltd_fc[t] - setup.ltd_fc[t - 1] + demands[t - 1];
        let arrives_at = t + leadtimes[t] as usize;
        setup.arrivals[arrives_at] += q;
        trace.records.push(OrderRecord { placed_at: t, quantity: q, lead_time: leadtimes[t], arrives_at });

        let received = setup.arrivals[t];
        ns += received - demands[t];

        trace.demand.push(demands[t]);
        trace.lead_time.push(leadtimes[t]);
        trace.demand_forecast.push(setup.demand_fc[t]);
        trace.leadtime_forecast.push(setup.lead_fc[t]);
        trace.ltd_forecast.push(setup.ltd_fc[t]);
        trace.order.push(q);
        trace.receipts.push(received);
        trace.net_stock.push(ns);
    }
    Ok(trace)
}

/// Same policy, but each order is computed as the gap between the
/// order-up-to level and the current inventory position (net stock plus
/// outstanding orders). Returns only the order series; used to cross-check
/// [`run_out_policy`].
pub fn orders_via_inventory_position(
    demands: &[f64],
    leadtimes: &[u32],
    cfg: &ForecastConfig,
    tns: f64,
) -> Result<Vec<f64>> {
    let mut setup = prepare(demands, leadtimes, cfg, tns)?;
    let t_total = demands.len();
    let first = setup.first;

    let mut ns = setup.ns_before_first;
    let mut on_order = setup.on_order_first;
    let mut orders = Vec::with_capacity(t_total - first);
    for t in first..t_total {
        let target = setup.ltd_fc[t] + tns;
        let q = target - (ns + on_order);
        setup.arrivals[t + leadtimes[t] as usize] += q;
        on_order += q;

        let received = setup.arrivals[t];
        on_order -= received;
        ns += received - demands[t];
        orders.push(q);
    }
    Ok(orders)
}

/// Empirical target net stock: the `b/(b+h)` quantile (nearest-rank) of the
/// shortfall distribution `-net_stock`, i.e. the smallest shift that would
/// have covered demand in that fraction of observed periods.
pub fn tns_empirical(net_stock: &[f64], costs: &CostParams) -> Result<f64> {
    if net_stock.is_empty() {
        return Err(Error::InvalidParameter("net-stock sample must not be empty".into()));
    }
    let mut shortfall: Vec<f64> = net_stock.iter().map(|&x| -x).collect();
    shortfall.sort_by(|a, b| a.partial_cmp(b).expect("net stock must not contain NaN"));
    let q = costs.fractile();
    let rank = ((q * shortfall.len() as f64).ceil() as usize).clamp(1, shortfall.len());
    Ok(shortfall[rank - 1])
}
