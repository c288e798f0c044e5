use rayon::prelude::*;

use super::{min_over_configs, CoverageReport, GridInfo, ThreePointConfig, VIOLATION_TOL};
use crate::error::{domain, Error, Result};
use crate::intervals::optimal_upray;
use crate::inverse::check_level;
use crate::region::ConfidenceRegion;

pub const DEFAULT_GRID_RESOLUTION: f64 = 1e-4;

/// Offset used to probe either side of an endpoint.
const SIDE_PROBE: f64 = 1e-12;

/// Probes per gap in [`buehler_falsify`], and the decades they span.
const FALSIFY_PROBES: usize = 64;
const FALSIFY_DECADES: f64 = 9.0;

fn audit_grid(region: &ConfidenceRegion, resolution: f64) -> (Vec<f64>, GridInfo) {
    let mut ends = region.endpoint_values();
    ends.sort_by(f64::total_cmp);
    ends.dedup();

    let steps = (1.0 / resolution).ceil() as usize;
    let mut grid: Vec<f64> = (0..=steps).map(|i| i as f64 / steps as f64).collect();
    for &t in &ends {
        grid.extend(
            [t - SIDE_PROBE, t, t + SIDE_PROBE]
                .into_iter()
                .filter(|v| (0.0..=1.0).contains(v)),
        );
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let info = GridInfo {
        resolution: Some(resolution),
        endpoints: ends.len(),
        points: grid.len(),
    };
    (grid, info)
}

/// Smallest entry, ties to the earliest.
fn argmin(results: &[(f64, ThreePointConfig)]) -> usize {
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.0 < results[best].0 {
            best = i;
        }
    }
    best
}

/// Minimal coverage over the audit grid: every endpoint, every endpoint
/// `± 1e-12`, and a uniform grid of the given spacing. This bounds the true
/// effective level from above; the two agree wherever the infimum is
/// attained at a grid mean.
pub fn effective_level(region: &ConfidenceRegion, grid_resolution: f64) -> Result<CoverageReport> {
    if !(grid_resolution > 0.0 && grid_resolution <= 1.0) {
        return Err(domain(format!(
            "grid resolution {grid_resolution} is not in ]0, 1]"
        )));
    }
    let (grid, info) = audit_grid(region, grid_resolution);
    let results: Vec<(f64, ThreePointConfig)> = grid
        .par_iter()
        .map(|&pi| min_over_configs(region, pi))
        .collect();
    let i = argmin(&results);
    let (cov, witness) = results[i];
    Ok(CoverageReport::new(
        cov,
        witness,
        grid[i],
        info,
        region.beta(),
    ))
}

/// [`effective_level`] judged against `beta` rather than the region's
/// nominal level.
pub fn validate_region(
    region: &ConfidenceRegion,
    beta: f64,
    grid_resolution: f64,
) -> Result<CoverageReport> {
    check_level(beta)?;
    Ok(effective_level(region, grid_resolution)?.with_target(beta))
}

/// Looks for a mean whose coverage under `candidate` falls below `beta`.
///
/// Probes `0` first, then, at every `x` where the candidate's lower endpoint
/// `c` exceeds the optimal one `g`, the 64 means `g + (c - g)·10^(-9k/64)`
/// for `k = 1..=64`, all strictly inside the gap.
/// Returns the first violating report, or [`Error::NotFalsified`] carrying
/// the lowest coverage seen.
pub fn buehler_falsify(candidate: &ConfidenceRegion, beta: f64) -> Result<CoverageReport> {
    check_level(beta)?;
    let n = candidate.n();
    if n == 0 {
        return Err(domain("buehler_falsify needs n >= 1"));
    }
    let mut probes = vec![0.0];
    let optimal = optimal_upray(n, beta)?;
    for x in 1..=n {
        let g = optimal.lower_endpoint(x);
        let c = candidate.value(x).infimum().map_or(1.0, |b| b.value());
        if c > g {
            probes.extend((0..FALSIFY_PROBES).map(|k| {
                let scale = 10f64.powf(-FALSIFY_DECADES * (k + 1) as f64 / FALSIFY_PROBES as f64);
                g + (c - g) * scale
            }));
        }
    }

    let info = GridInfo {
        resolution: None,
        endpoints: 0,
        points: probes.len(),
    };
    let results: Vec<(f64, ThreePointConfig)> = probes
        .par_iter()
        .map(|&pi| min_over_configs(candidate, pi))
        .collect();
    // report the first violating probe in probe order
    let hit = results.iter().position(|r| r.0 < beta - VIOLATION_TOL);
    let i = hit.unwrap_or_else(|| argmin(&results));
    let (cov, witness) = results[i];
    let report = CoverageReport::new(cov, witness, probes[i], info, beta);
    if hit.is_some() {
        Ok(report)
    } else {
        Err(Error::NotFalsified {
            beta,
            report: Box::new(report),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval_set::IntervalSet;
    use crate::intervals::{kstar_example, optimal_upray, sterne_interval, two_sided_cp};
    use crate::inverse::{cp_upray, g_inverse};
    use crate::region::{reflect_region, RegionKind};

    #[test]
    fn grid_contains_endpoints_and_probes() {
        let k = cp_upray(2, 0.9).unwrap();
        let (grid, info) = audit_grid(&k, 0.01);
        let g1 = g_inverse(2, 1, 0.9).unwrap();
        assert!(grid.contains(&g1) && grid.contains(&(g1 - 1e-12)) && grid.contains(&(g1 + 1e-12)));
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(info.points, grid.len());
        assert_eq!(grid[0], 0.0);
        assert_eq!(*grid.last().unwrap(), 1.0);
    }

    #[test]
    fn effective_levels_small_n() {
        let opt = optimal_upray(3, 0.9).unwrap().region;
        let r = effective_level(&opt, 1e-3).unwrap();
        assert!((r.min_coverage - 0.9).abs() < 1e-9 && !r.violated);

        let cp = cp_upray(3, 0.9).unwrap();
        let r = effective_level(&cp, 1e-3).unwrap();
        let gamma = 1.0 - 3.0 * (1.0 - 0.9f64.powf(1.0 / 3.0));
        assert!((r.min_coverage - gamma).abs() < 1e-6);
        assert!((r.min_coverage - 0.896468).abs() < 1e-6);
        assert!(r.violated);

        let t = ConfidenceRegion::trivial(4, 0.9).unwrap();
        assert_eq!(effective_level(&t, 1e-2).unwrap().min_coverage, 1.0);
        assert!(effective_level(&t, 0.0).is_err());
    }

    #[test]
    fn reflection_preserves_level() {
        for n in [2usize, 5] {
            let cp = cp_upray(n, 0.9).unwrap();
            let a = effective_level(&cp, 1e-3).unwrap().min_coverage;
            let b = effective_level(&reflect_region(&cp), 1e-3)
                .unwrap()
                .min_coverage;
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn validation_cases() {
        for n in 1..=6 {
            let r = validate_region(&two_sided_cp(n, 0.9).unwrap(), 0.9, 1e-3).unwrap();
            assert!(!r.violated, "n={n} {r:?}");
        }
        let r = validate_region(&cp_upray(2, 0.9).unwrap(), 0.9, 1e-3).unwrap();
        assert!(r.violated);
        let g1 = g_inverse(2, 1, 0.9).unwrap();
        assert!(r.mean > 0.05 && r.mean <= g1);

        let r = validate_region(&sterne_interval(2, 0.9).unwrap(), 0.9, 1e-3).unwrap();
        assert!(r.violated && r.min_coverage < 0.9 - 1e-6);
        assert!((r.mean - g1).abs() < 1e-6, "{r:?}");

        for n in 1..=5 {
            let r = validate_region(&kstar_example(n, 0.9).unwrap(), 0.9, 1e-3).unwrap();
            assert!(!r.violated, "n={n}");
        }
    }

    #[test]
    fn falsify_raised_endpoint() {
        let (n, beta) = (2, 0.9);
        let mut values = optimal_upray(n, beta).unwrap().region.values().to_vec();
        values[1] = IntervalSet::upray((1.0 - beta) / n as f64 + 0.01, false).unwrap();
        let cand = ConfidenceRegion::new(beta, RegionKind::Upray, values).unwrap();
        let r = buehler_falsify(&cand, beta).unwrap();
        assert!(r.mean > 0.05 && r.mean < 0.06);
        assert_eq!((r.witness.r, r.witness.s), (0, 1));
        assert!((r.min_coverage - (1.0 - 2.0 * r.mean)).abs() < 1e-14);
        assert!(r.min_coverage < 0.9);
    }

    #[test]
    fn falsify_cp_and_zero() {
        for n in 2..=6 {
            assert!(
                buehler_falsify(&cp_upray(n, 0.9).unwrap(), 0.9)
                    .unwrap()
                    .violated
            );
        }
        let mut values = optimal_upray(3, 0.9).unwrap().region.values().to_vec();
        values[0] = IntervalSet::upray(0.01, true).unwrap();
        let cand = ConfidenceRegion::new(0.9, RegionKind::Upray, values).unwrap();
        let r = buehler_falsify(&cand, 0.9).unwrap();
        assert_eq!(r.mean, 0.0);
        assert_eq!(r.min_coverage, 0.0);
    }

    #[test]
    fn optimal_cannot_be_falsified() {
        let opt = optimal_upray(4, 0.9).unwrap().region;
        match buehler_falsify(&opt, 0.9) {
            Err(Error::NotFalsified { report, .. }) => assert!(report.min_coverage >= 0.9 - 1e-9),
            other => panic!("unexpected {other:?}"),
        }
    }
}
