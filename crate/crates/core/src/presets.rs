//! Built-in benchmark scenarios: one demand/lead-time parameterization
//! (mu_D=20, sigma_D=4, mu_L=10, sigma_L=5, two-point lead times on {5, 15})
//! crossed with eight forecast window pairs. The `figN` names are the stable
//! external identifiers used by the command line.

use crate::analytics::BmInputs;
use crate::error::Result;
use crate::forecast::ForecastConfig;
use crate::stochastic::{DemandParams, LeadTimeDist};

pub const MU_D: f64 = 20.0;
pub const SIGMA_D: f64 = 4.0;
pub const MU_L: f64 = 10.0;
pub const SIGMA_L: f64 = 5.0;

/// A named forecast-window combination on the shared benchmark parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    /// Demand forecast window.
    pub n: u32,
    /// Lead-time forecast window.
    pub m: u32,
}

/// All eight benchmark scenarios, selectable together under the name
/// `paper`.
pub const ALL: [Preset; 8] = [
    Preset { name: "fig3", n: 5, m: 2 },
    Preset { name: "fig4", n: 6, m: 2 },
    Preset { name: "fig5", n: 15, m: 2 },
    Preset { name: "fig6", n: 16, m: 2 },
    Preset { name: "fig7", n: 5, m: 20 },
    Preset { name: "fig8", n: 6, m: 20 },
    Preset { name: "fig9", n: 21, m: 20 },
    Preset { name: "fig10", n: 22, m: 20 },
];

/// Name of the meta-preset expanding to [`ALL`].
pub const ALL_NAME: &str = "paper";

/// Looks up a single scenario by name.
pub fn find(name: &str) -> Option<&'static Preset> {
    ALL.iter().find(|p| p.name == name)
}

/// Resolves a preset name to one or all scenarios.
pub fn resolve(name: &str) -> Option<Vec<Preset>> {
    if name == ALL_NAME {
        Some(ALL.to_vec())
    } else {
        find(name).map(|p| vec![*p])
    }
}

impl Preset {
    /// Closed-form inputs at the given demand autocorrelation.
    pub fn inputs(&self, rho: f64) -> Result<BmInputs> {
        let d = DemandParams::new(MU_D, rho, SIGMA_D)?;
        BmInputs::new(d, MU_L, SIGMA_L * SIGMA_L, self.n, self.m)
    }

    /// The benchmark lead-time distribution: equal weights on {5, 15}.
    pub fn dist(&self) -> LeadTimeDist {
        LeadTimeDist::two_point(MU_L, SIGMA_L).expect("benchmark moments are two-point representable")
    }

    /// Matching simulation forecast windows.
    pub fn forecast_config(&self) -> Result<ForecastConfig> {
        ForecastConfig::new(self.n as usize, self.m as usize, self.dist().l_plus())
    }
}
