//! Confidence-region constructions for the mean success probability.
//!
//! - [`combine`] lifts a family of binomial regions to a region valid for
//!   every inhomogeneous chain.
//! - [`optimal_upray`] / [`optimal_downray`] are the combinator applied to
//!   Clopper-Pearson rays, computed by exhaustive minimization.
//! - [`two_sided_cp`] and [`two_sided_optimal`] intersect rays at level
//!   `(1 + β) / 2`.
//! - [`agnew_upray`], [`sterne_interval`] and [`kstar_example`] are the
//!   comparison regions.

mod combine;
mod comparison;
mod optimal;
mod two_sided;

pub use combine::{combine, CombinatorInput};
pub use comparison::{
    agnew_upray, kstar_example, sterne_interval, sterne_interval_with, SterneScan, SterneScanResult,
};
pub use optimal::{
    optimal_downray, optimal_downray_with, optimal_lower_endpoint, optimal_upray,
    optimal_upray_with, OptimalUprayResult,
};
pub use two_sided::{two_sided_cp, two_sided_cp_with, two_sided_optimal, two_sided_optimal_with};

pub use crate::region::{reflect_region, region_subset, SubsetCheck};

/// Families `m -> K'_m` for `m = 0..=n`, used as combinator input.
pub mod families {
    use super::comparison::sterne_interval;
    use crate::error::Result;
    use crate::inverse::{cp_upray_cached, GCache};
    use crate::region::ConfidenceRegion;

    pub fn cp_uprays(n: usize, beta: f64, cache: &GCache) -> Result<Vec<ConfidenceRegion>> {
        (0..=n).map(|m| cp_upray_cached(m, beta, cache)).collect()
    }

    pub fn sterne(n: usize, beta: f64) -> Result<Vec<ConfidenceRegion>> {
        (0..=n).map(|m| sterne_interval(m, beta)).collect()
    }
}
