use crate::error::{domain, Result};
use crate::inverse::{check_level, cp_downray_cached, cp_upray_cached, GCache};
use crate::region::{intersect_regions, ConfidenceRegion, RegionKind};

use super::optimal::{optimal_downray_with, optimal_upray_with};

fn half_level(n: usize, beta: f64) -> Result<f64> {
    check_level(beta)?;
    if n == 0 {
        return Err(domain("two-sided regions need n >= 1"));
    }
    Ok((1.0 + beta) / 2.0)
}

/// Two-sided Clopper-Pearson interval: CP upray and downray at level
/// `(1 + β) / 2`, intersected pointwise.
pub fn two_sided_cp(n: usize, beta: f64) -> Result<ConfidenceRegion> {
    two_sided_cp_with(n, beta, &GCache::new())
}

pub fn two_sided_cp_with(n: usize, beta: f64, cache: &GCache) -> Result<ConfidenceRegion> {
    let gamma = half_level(n, beta)?;
    intersect_regions(
        &cp_upray_cached(n, gamma, cache)?,
        &cp_downray_cached(n, gamma, cache)?,
        beta,
        RegionKind::TwoSided,
    )
}

/// Optimal upray and downray at level `(1 + β) / 2`, intersected pointwise.
pub fn two_sided_optimal(n: usize, beta: f64) -> Result<ConfidenceRegion> {
    two_sided_optimal_with(n, beta, &GCache::new())
}

pub fn two_sided_optimal_with(n: usize, beta: f64, cache: &GCache) -> Result<ConfidenceRegion> {
    let gamma = half_level(n, beta)?;
    intersect_regions(
        &optimal_upray_with(n, gamma, cache)?.region,
        &optimal_downray_with(n, gamma, cache)?,
        beta,
        RegionKind::TwoSided,
    )
}
