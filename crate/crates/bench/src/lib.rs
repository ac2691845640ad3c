//! Shared fixtures for the criterion benchmarks.

use bullwhip_core::{BmInputs, DemandParams};

/// The benchmark scenario: short windows, moderate positive autocorrelation.
pub fn benchmark_inputs() -> BmInputs {
    let demand = DemandParams::new(20.0, 0.5, 4.0).expect("valid demand parameters");
    BmInputs::new(demand, 10.0, 25.0, 5, 2).expect("valid inputs")
}
