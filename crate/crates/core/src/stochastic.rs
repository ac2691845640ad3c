//! Demand and lead-time generators: stationary AR(1) demand series and iid
//! bounded discrete lead times with exact, queryable moments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Normal, StandardNormal};

use crate::error::{Error, Result};

/// Parameters of the stationary AR(1) demand process
/// `D_t = mu_d + rho (D_{t-1} - mu_d) + eps_t`.
///
/// Parameterized by the stationary standard deviation `sigma_d`; the
/// innovation standard deviation is derived as `sigma_eps = sigma_d
/// sqrt(1 - rho^2)` so that sweeps over `rho` hold the demand variance fixed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DemandParams {
    mu_d: f64,
    rho: f64,
    sigma_d: f64,
    sigma_eps: f64,
}

impl DemandParams {
    /// Builds validated parameters. Requires `|rho| < 1` strictly and
    /// `sigma_d > 0`.
    pub fn new(mu_d: f64, rho: f64, sigma_d: f64) -> Result<Self> {
        if !mu_d.is_finite() {
            return Err(Error::InvalidParameter(format!("mu_d must be finite, got {mu_d}")));
        }
        if !rho.is_finite() || rho.abs() >= 1.0 {
            return Err(Error::Domain(format!("rho must satisfy |rho| < 1 strictly, got {rho}")));
        }
        if !sigma_d.is_finite() || sigma_d <= 0.0 {
            return Err(Error::InvalidParameter(format!("sigma_d must be > 0, got {sigma_d}")));
        }
        let sigma_eps = sigma_d * (1.0 - rho * rho).sqrt();
        Ok(Self { mu_d, rho, sigma_d, sigma_eps })
    }

    /// Same process with a different autocorrelation, keeping the mean and
    /// the stationary standard deviation.
    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Self::new(self.mu_d, rho, self.sigma_d)
    }

    pub fn mu_d(&self) -> f64 {
        self.mu_d
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Stationary standard deviation of demand.
    pub fn sigma_d(&self) -> f64 {
        self.sigma_d
    }

    /// Stationary variance of demand.
    pub fn var_d(&self) -> f64 {
        self.sigma_d * self.sigma_d
    }

    /// Innovation standard deviation, `sigma_d sqrt(1 - rho^2)`.
    pub fn sigma_eps(&self) -> f64 {
        self.sigma_eps
    }
}

/// Reproducible RNG handle: identical `(seed, stream)` pairs yield bitwise
/// identical series on every platform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeededStream {
    pub seed: u64,
    pub stream: u64,
}

impl SeededStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Generates `len` demands. The chain starts from a stationary draw
/// `N(mu_d, sigma_d^2)`, takes `warmup` unrecorded steps, then records the
/// next `len` values. Draws are Gaussian; see [`gen_demand_with`] for other
/// innovation distributions.
pub fn gen_demand(params: &DemandParams, len: usize, warmup: usize, stream: SeededStream) -> Result<Vec<f64>> {
    gen_demand_with(params, len, warmup, stream, |rng| rng.sample(StandardNormal))
}

/// [`gen_demand`] with a pluggable innovation sampler. `innovation` must
/// return zero-mean unit-variance draws; they are scaled by `sigma_eps`
/// internally. The initial state is `mu_d + sigma_d * innovation(rng)`, which
/// is exactly stationary only for Gaussian innovations; rely on `warmup` for
/// anything else.
pub fn gen_demand_with<F>(
    params: &DemandParams,
    len: usize,
    warmup: usize,
    stream: SeededStream,
    mut innovation: F,
) -> Result<Vec<f64>>
where
    F: FnMut(&mut ChaCha8Rng) -> f64,
{
    if len == 0 {
        return Err(Error::InvalidParameter("demand series length must be >= 1".into()));
    }
    let mut rng = stream.rng();
    let mu = params.mu_d;
    let rho = params.rho;
    let se = params.sigma_eps;

    let mut state = mu + params.sigma_d * innovation(&mut rng);
    for _ in 0..warmup {
        state = mu + rho * (state - mu) + se * innovation(&mut rng);
    }
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        state = mu + rho * (state - mu) + se * innovation(&mut rng);
        out.push(state);
    }
    Ok(out)
}

/// Bounded discrete lead-time distribution on `{0, ..., l_plus}`.
///
/// Moments are always recomputed from the pmf; nothing is cached.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadTimeDist {
    /// `pmf[l]` is the probability of lead time `l`; the last entry defines
    /// the declared bound `l_plus` and may be zero only by explicit choice.
    pmf: Vec<f64>,
}

impl LeadTimeDist {
    /// Builds a distribution from `(lead_time, probability)` pairs. The
    /// largest mentioned lead time declares the bound `l_plus`, even when its
    /// probability is zero. Probabilities must be nonnegative and sum to 1
    /// within 1e-12.
    pub fn from_pmf(entries: &[(u32, f64)]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("lead-time pmf must not be empty".into()));
        }
        let l_plus = entries.iter().map(|&(l, _)| l).max().unwrap() as usize;
        let mut pmf = vec![0.0; l_plus + 1];
        let mut seen = vec![false; l_plus + 1];
        for &(l, p) in entries {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "probability of lead time {l} must be finite and >= 0, got {p}"
                )));
            }
            if seen[l as usize] {
                return Err(Error::InvalidParameter(format!("duplicate pmf entry for lead time {l}")));
            }
            seen[l as usize] = true;
            pmf[l as usize] = p;
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "lead-time pmf must sum to 1 within 1e-12, got {total}"
            )));
        }
        Ok(Self { pmf })
    }

    /// Two-point distribution `{mu_l - sigma_l, mu_l + sigma_l}` with equal
    /// weights, matching the requested mean and standard deviation exactly.
    /// Both support points must be nonnegative integers (within 1e-9);
    /// otherwise supply an explicit pmf via [`LeadTimeDist::from_pmf`].
    pub fn two_point(mu_l: f64, sigma_l: f64) -> Result<Self> {
        if !mu_l.is_finite() || !sigma_l.is_finite() || sigma_l < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "two-point moments must be finite with sigma_l >= 0, got mu_l={mu_l}, sigma_l={sigma_l}"
            )));
        }
        let lo = mu_l - sigma_l;
        let hi = mu_l + sigma_l;
        if lo < -1e-9 {
            return Err(Error::InvalidParameter(format!(
                "two-point support {lo} is negative; lead times must be >= 0"
            )));
        }
        for x in [lo, hi] {
            if (x - x.round()).abs() > 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "two-point support {x} is not an integer; supply an explicit pmf instead"
                )));
            }
        }
        let lo = lo.round().max(0.0) as u32;
        let hi = hi.round() as u32;
        if lo == hi {
            Ok(Self::constant(lo))
        } else {
            Self::from_pmf(&[(lo, 0.5), (hi, 0.5)])
        }
    }

    /// Deterministic lead time.
    pub fn constant(l: u32) -> Self {
        let mut pmf = vec![0.0; l as usize + 1];
        pmf[l as usize] = 1.0;
        Self { pmf }
    }

    /// Declared upper bound of the support.
    pub fn l_plus(&self) -> u32 {
        (self.pmf.len() - 1) as u32
    }

    /// Probability of each lead time `0..=l_plus`.
    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// Mean lead time, recomputed from the pmf.
    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(l, p)| l as f64 * p).sum()
    }

    /// Lead-time variance, recomputed from the pmf.
    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.pmf.iter().enumerate().map(|(l, p)| p * (l as f64 - mu) * (l as f64 - mu)).sum()
    }

    /// Inverse-CDF lookup for `u` in `[0, 1)`. Exact on the bounded support.
    pub fn quantile(&self, u: f64) -> u32 {
        let mut cum = 0.0;
        for (l, p) in self.pmf.iter().enumerate() {
            cum += p;
            if u < cum {
                return l as u32;
            }
        }
        self.l_plus()
    }
}

/// Generates `len` iid lead times by inverse-CDF sampling.
pub fn gen_leadtimes(dist: &LeadTimeDist, len: usize, stream: SeededStream) -> Result<Vec<u32>> {
    if len == 0 {
        return Err(Error::InvalidParameter("lead-time series length must be >= 1".into()));
    }
    let mut rng = stream.rng();
    Ok((0..len).map(|_| dist.quantile(rng.random::<f64>())).collect())
}

/// Gaussian innovation distribution used by [`gen_demand`], exposed for
/// callers that want the same draws outside the generator.
pub fn standard_normal() -> Normal<f64> {
    Normal::new(0.0, 1.0).expect("unit normal is always valid")
}
