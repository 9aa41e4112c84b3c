//! Fixtures shared by the benchmarks.

use kuhn3::{PotSize, StrategyProfile, NUM_FREQS};

pub fn pot(p: f64) -> PotSize {
    PotSize::new(p).expect("valid pot")
}

/// A fixed interior profile with distinct coordinates.
pub fn interior_profile() -> StrategyProfile {
    StrategyProfile::new(std::array::from_fn(|i| 0.15 + 0.7 * i as f64 / (NUM_FREQS - 1) as f64))
        .expect("interior profile")
}
