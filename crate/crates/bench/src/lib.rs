//! Shared fixtures for the criterion benches.

use propagators::numerics::BesselOrder;

/// Orders exercised by the benches: the tested integer and half-integer set.
pub fn bench_orders() -> Vec<BesselOrder> {
    [0.0, 0.5, 1.0, 2.5]
        .iter()
        .map(|&n| BesselOrder::new(n).expect("non-negative order"))
        .collect()
}
