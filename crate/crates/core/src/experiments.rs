//! Experiment harness: Monte Carlo estimation of the amplification ratio,
//! sweeps over the demand autocorrelation, numeric location of curve
//! extrema, and the three-way validation report (closed form vs variance
//! decomposition vs simulation).

use rayon::prelude::*;

use crate::analytics::{bm_analytic, BmInputs};
use crate::decomposition::var_order_decomposed;
use crate::error::{Error, Result};
use crate::forecast::ForecastConfig;
use crate::policy::run_out_policy;
use crate::stochastic::{gen_demand, gen_leadtimes, DemandParams, LeadTimeDist, SeededStream};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 42;

/// Offset multiplier decorrelating per-row seeds derived from one base seed.
const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Monte Carlo effort knobs. `periods` counts post-burn-in measured periods
/// per replication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McSettings {
    pub periods: usize,
    pub replications: usize,
    pub seed: u64,
}

impl Default for McSettings {
    fn default() -> Self {
        Self { periods: 200_000, replications: 16, seed: DEFAULT_SEED }
    }
}

/// Replication-averaged estimate with its standard error across
/// replications.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub bm: f64,
    pub se: f64,
}

/// Default number of recorded periods to discard before measuring: ten
/// spans of the combined forecast memory plus a flat floor.
pub fn default_burn_in(cfg: &ForecastConfig) -> usize {
    10 * (cfg.n() + cfg.m() + cfg.l_plus() as usize) + 1000
}

/// Estimates the amplification ratio by simulation: `replications`
/// independent runs of `periods` measured periods each, every run on its own
/// seeded stream pair. The distribution must carry exactly the moments the
/// analytic inputs claim, otherwise the comparison would be meaningless.
pub fn estimate_bm_mc(
    inputs: &BmInputs,
    dist: &LeadTimeDist,
    periods: usize,
    replications: usize,
    seed: u64,
) -> Result<McEstimate> {
    if (dist.mean() - inputs.mu_l()).abs() > 1e-9 || (dist.variance() - inputs.sigma_l2()).abs() > 1e-9 {
        return Err(Error::Config(format!(
            "lead-time distribution moments ({}, {}) do not match the analytic inputs ({}, {})",
            dist.mean(),
            dist.variance(),
            inputs.mu_l(),
            inputs.sigma_l2()
        )));
    }
    if periods < 10_000 {
        return Err(Error::InvalidParameter(format!(
            "periods must be >= 10000 for a stable variance ratio, got {periods}"
        )));
    }
    if replications < 2 {
        return Err(Error::InvalidParameter("need at least 2 replications for a standard error".into()));
    }

    let cfg = ForecastConfig::new(inputs.n() as usize, inputs.m() as usize, dist.l_plus())?;
    let burn_in = default_burn_in(&cfg);
    let total = cfg.first_forecastable() + 1 + burn_in + periods;

    let estimates: Vec<f64> = (0..replications as u64)
        .into_par_iter()
        .map(|r| -> Result<f64> {
            let demands = gen_demand(inputs.demand(), total, 1000, SeededStream::new(seed, 2 * r))?;
            let leads = gen_leadtimes(dist, total, SeededStream::new(seed, 2 * r + 1))?;
            let trace = run_out_policy(&demands, &leads, &cfg, 0.0, burn_in)?;
            Ok(trace.bm_estimate())
        })
        .collect::<Result<Vec<f64>>>()?;

    let rf = replications as f64;
    let bm = estimates.iter().sum::<f64>() / rf;
    let var = estimates.iter().map(|e| (e - bm) * (e - bm)).sum::<f64>() / (rf - 1.0);
    Ok(McEstimate { bm, se: (var / rf).sqrt() })
}

/// Scenario parameters shared across a sweep: everything except the demand
/// autocorrelation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepBase {
    pub mu_d: f64,
    pub sigma_d: f64,
    pub mu_l: f64,
    pub sigma_l2: f64,
    pub n: u32,
    pub m: u32,
}

/// A sweep over demand autocorrelation values, optionally with Monte Carlo
/// confirmation at every point.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub rho_grid: Vec<f64>,
    pub base: SweepBase,
    pub mc: Option<McSettings>,
    /// When true (the default), `sigma_d` is the stationary demand sd, held
    /// fixed across the grid by rescaling the innovation variance. When
    /// false, `sigma_d` is the innovation sd and the stationary sd grows as
    /// `rho` approaches the unit circle.
    pub hold_sigma_d_constant: bool,
}

impl SweepSpec {
    pub fn new(rho_grid: Vec<f64>, base: SweepBase) -> Self {
        Self { rho_grid, base, mc: None, hold_sigma_d_constant: true }
    }
}

/// One point of a sweep curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BmCurvePoint {
    pub rho: f64,
    pub bm_analytic: f64,
    pub bm_mc: Option<f64>,
    pub bm_mc_se: Option<f64>,
}

fn inputs_at(base: &SweepBase, rho: f64, hold_sigma_d: bool) -> Result<BmInputs> {
    let sigma_d =
        if hold_sigma_d { base.sigma_d } else { base.sigma_d / (1.0 - rho * rho).sqrt() };
    let demand = DemandParams::new(base.mu_d, rho, sigma_d)?;
    BmInputs::new(demand, base.mu_l, base.sigma_l2, base.n, base.m)
}

/// Evaluates the amplification curve over the grid, sorted by `rho`. Monte
/// Carlo points, when requested, use a two-point lead-time distribution
/// matching the base moments, each grid point on decorrelated seeds.
pub fn sweep_rho(spec: &SweepSpec) -> Result<Vec<BmCurvePoint>> {
    for &rho in &spec.rho_grid {
        if !rho.is_finite() || rho.abs() >= 1.0 {
            return Err(Error::Domain(format!("sweep grid must lie strictly inside (-1, 1), got {rho}")));
        }
    }
    let dist = match &spec.mc {
        Some(mc) => {
            if mc.periods < 10_000 {
                return Err(Error::InvalidParameter(format!(
                    "periods must be >= 10000 for a stable variance ratio, got {}",
                    mc.periods
                )));
            }
            Some(LeadTimeDist::two_point(spec.base.mu_l, spec.base.sigma_l2.sqrt())?)
        }
        None => None,
    };

    let mut grid = spec.rho_grid.clone();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("grid entries are finite"));

    let mut points = Vec::with_capacity(grid.len());
    for (idx, &rho) in grid.iter().enumerate() {
        let inputs = inputs_at(&spec.base, rho, spec.hold_sigma_d_constant)?;
        let analytic = bm_analytic(&inputs).value;
        let (bm_mc, bm_mc_se) = match (&spec.mc, &dist) {
            (Some(mc), Some(dist)) => {
                let seed = mc.seed.wrapping_add((idx as u64).wrapping_mul(SEED_STRIDE));
                let est = estimate_bm_mc(&inputs, dist, mc.periods, mc.replications, seed)?;
                (Some(est.bm), Some(est.se))
            }
            _ => (None, None),
        };
        points.push(BmCurvePoint { rho, bm_analytic: analytic, bm_mc, bm_mc_se });
    }
    Ok(points)
}

/// Writes sweep points in long format, one row per grid point, with the
/// window sizes repeated so curves from several scenarios can be stacked in
/// one file.
pub fn write_sweep_csv<W: std::io::Write>(
    w: &mut W,
    points: &[BmCurvePoint],
    n: u32,
    m: u32,
    header: bool,
) -> std::io::Result<()> {
    if header {
        writeln!(w, "rho,n,m,bm_analytic,bm_mc,bm_mc_se")?;
    }
    for p in points {
        let mc = p.bm_mc.map(|v| v.to_string()).unwrap_or_default();
        let se = p.bm_mc_se.map(|v| v.to_string()).unwrap_or_default();
        writeln!(w, "{},{},{},{},{},{}", p.rho, n, m, p.bm_analytic, mc, se)?;
    }
    Ok(())
}

/// Kind of interior stationary point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

/// An interior stationary point of the amplification curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StationaryPoint {
    pub rho: f64,
    pub kind: ExtremumKind,
    pub bm: f64,
}

const SCAN_STEP: f64 = 1e-3;
const DERIV_STEP: f64 = 1e-5;
const ROOT_TOL: f64 = 1e-6;

/// Locates interior stationary points of `rho -> BM(rho)` inside
/// `(lo, hi) ⊆ [-1, 1]`: scans the derivative (central differences on the
/// closed form) on a 1e-3 grid, brackets sign changes, bisects each bracket
/// to 1e-6, and classifies by the second difference.
pub fn find_stationary_points(inputs: &BmInputs, lo: f64, hi: f64) -> Result<Vec<StationaryPoint>> {
    if !(-1.0..=1.0).contains(&lo) || !(-1.0..=1.0).contains(&hi) || lo >= hi {
        return Err(Error::Domain(format!(
            "region must satisfy -1 <= lo < hi <= 1, got ({lo}, {hi})"
        )));
    }
    let f = |rho: f64| bm_analytic(&inputs.with_rho(rho).expect("scan stays inside (-1, 1)")).value;
    let g = |rho: f64| (f(rho + DERIV_STEP) - f(rho - DERIV_STEP)) / (2.0 * DERIV_STEP);

    // Stay clear of the unit circle so the derivative stencil remains valid.
    let start = lo.max(-1.0 + SCAN_STEP);
    let end = hi.min(1.0 - SCAN_STEP);
    if start >= end {
        return Ok(Vec::new());
    }

    let steps = ((end - start) / SCAN_STEP).round() as usize;
    let mut points = Vec::new();
    let mut prev_x = start;
    let mut prev_g = g(start);
    for i in 1..=steps {
        let x = start + i as f64 * SCAN_STEP;
        let gx = g(x);
        if prev_g * gx < 0.0 {
            let (mut a, mut b, mut ga) = (prev_x, x, prev_g);
            while b - a > ROOT_TOL {
                let mid = 0.5 * (a + b);
                let gm = g(mid);
                if ga * gm <= 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    ga = gm;
                }
            }
            let root = 0.5 * (a + b);
            let curvature = f(root + 1e-4) - 2.0 * f(root) + f(root - 1e-4);
            let kind = if curvature > 0.0 { ExtremumKind::Minimum } else { ExtremumKind::Maximum };
            points.push(StationaryPoint { rho: root, kind, bm: f(root) });
        }
        prev_x = x;
        prev_g = gx;
    }
    Ok(points)
}

/// Thresholds for the validation verdicts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationSettings {
    pub mc: McSettings,
    /// Largest acceptable |simulation - closed form| in standard errors.
    pub z_threshold: f64,
    /// Largest acceptable relative gap between the two analytic paths.
    pub dual_path_rel_tol: f64,
}

impl Default for ValidationSettings {
    fn default() -> Self {
        Self { mc: McSettings::default(), z_threshold: 4.0, dual_path_rel_tol: 1e-10 }
    }
}

/// One row of the three-way comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationRow {
    pub rho: f64,
    pub n: u32,
    pub m: u32,
    pub bm_analytic: f64,
    /// The law-of-total-variance path, `Var q / sigma_D^2`.
    pub bm_decomposed: f64,
    pub bm_mc: f64,
    pub bm_mc_se: f64,
    pub z_score: f64,
    pub dual_path_rel_err: f64,
    pub pass: bool,
}

/// Validation outcome over a parameter grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
    pub pass: bool,
}

impl ValidationReport {
    /// CSV table of every row.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "rho,n,m,bm_analytic,bm_decomposed,bm_mc,bm_mc_se,z_score")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                r.rho, r.n, r.m, r.bm_analytic, r.bm_decomposed, r.bm_mc, r.bm_mc_se, r.z_score
            )?;
        }
        Ok(())
    }
}

/// Runs the three-way comparison at every grid point: the closed form, the
/// variance decomposition, and a fresh Monte Carlo estimate using the
/// distribution the factory assigns to the point. A row passes when the
/// z-score stays inside the threshold and the two analytic paths agree.
pub fn validate<F>(grid: &[BmInputs], dist_for: F, settings: &ValidationSettings) -> Result<ValidationReport>
where
    F: Fn(&BmInputs) -> Result<LeadTimeDist>,
{
    let mut rows = Vec::with_capacity(grid.len());
    for (idx, inputs) in grid.iter().enumerate() {
        let dist = dist_for(inputs)?;
        let analytic = bm_analytic(inputs).value;
        let decomposed = var_order_decomposed(inputs) / inputs.demand().var_d();
        let dual_path_rel_err = (decomposed / analytic - 1.0).abs();

        let seed = settings.mc.seed.wrapping_add((idx as u64).wrapping_mul(SEED_STRIDE));
        let est = estimate_bm_mc(inputs, &dist, settings.mc.periods, settings.mc.replications, seed)?;
        let z_score = (est.bm - analytic) / est.se;

        let pass = z_score.abs() <= settings.z_threshold && dual_path_rel_err <= settings.dual_path_rel_tol;
        rows.push(ValidationRow {
            rho: inputs.demand().rho(),
            n: inputs.n(),
            m: inputs.m(),
            bm_analytic: analytic,
            bm_decomposed: decomposed,
            bm_mc: est.bm,
            bm_mc_se: est.se,
            z_score,
            dual_path_rel_err,
            pass,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(ValidationReport { rows, pass })
}

/// Default validation grid: the four short-lead-time-window benchmark
/// scenarios crossed with five autocorrelation values.
pub fn default_validation_grid() -> Vec<BmInputs> {
    let mut grid = Vec::new();
    for preset in &crate::presets::ALL[..4] {
        for rho in [-0.9, -0.5, 0.0, 0.5, 0.9] {
            grid.push(preset.inputs(rho).expect("benchmark parameters are valid"));
        }
    }
    grid
}
