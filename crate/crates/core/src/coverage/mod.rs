//! Exact coverage of confidence regions under Poisson-binomial laws.
//!
//! At a fixed mean `π`, the coverage `BC_p(K ∋ π)` is minimized over
//! `{p : p̄ = π}` by a vector with `r` coordinates equal to one, `s` equal to
//! some `a`, and the rest zero. [`min_coverage_at_mean`] enumerates those
//! configurations exactly; [`effective_level`] scans `π` over a grid that
//! always contains the region's endpoints, where coverage jumps.

mod audit;
mod counterexamples;

use serde::Serialize;

use crate::distributions::{pb_prob, split_tails, PVector};
use crate::error::{domain, Result};
use crate::region::ConfidenceRegion;

pub use audit::{buehler_falsify, effective_level, validate_region, DEFAULT_GRID_RESOLUTION};
pub use counterexamples::{
    cp_hypergeom_coverage_exact, hypergeom_coverage, remark8_counterexample, Remark8Outcome,
};

/// Coverage below `β - VIOLATION_TOL` counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Slack allowed between `r + s·a` and `n·π`.
const MEAN_TOL: f64 = 1e-12;

/// `r` coordinates equal to one, `s` equal to `a`, `n - r - s` zeros.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreePointConfig {
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub a: f64,
}

impl ThreePointConfig {
    pub fn new(n: usize, r: usize, s: usize, a: f64) -> Result<Self> {
        if r + s > n {
            return Err(domain(format!("r + s = {} exceeds n = {n}", r + s)));
        }
        if !(0.0..=1.0).contains(&a) {
            return Err(domain(format!("a = {a} is not in [0, 1]")));
        }
        Ok(Self { n, r, s, a })
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        (self.r as f64 + self.s as f64 * self.a) / self.n as f64
    }

    pub fn to_pvector(&self) -> Result<PVector> {
        let mut p = vec![1.0; self.r];
        p.extend(std::iter::repeat_n(self.a, self.s));
        p.extend(std::iter::repeat_n(0.0, self.n - self.r - self.s));
        PVector::new(p)
    }
}

/// How the means of a report were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridInfo {
    /// Spacing of the uniform part, if any.
    pub resolution: Option<f64>,
    /// Distinct region endpoints, each probed at `t` and `t ± 1e-12`.
    pub endpoints: usize,
    /// Total number of means evaluated.
    pub points: usize,
}

impl GridInfo {
    fn single() -> Self {
        Self {
            resolution: None,
            endpoints: 0,
            points: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub min_coverage: f64,
    pub witness: ThreePointConfig,
    pub mean: f64,
    pub grid: GridInfo,
    /// Level the coverage is judged against.
    pub target: f64,
    pub violated: bool,
}

impl CoverageReport {
    fn new(
        min_coverage: f64,
        witness: ThreePointConfig,
        mean: f64,
        grid: GridInfo,
        target: f64,
    ) -> Self {
        Self {
            min_coverage,
            witness,
            mean,
            grid,
            target,
            violated: min_coverage < target - VIOLATION_TOL,
        }
    }

    fn with_target(mut self, target: f64) -> Self {
        self.target = target;
        self.violated = self.min_coverage < target - VIOLATION_TOL;
        self
    }
}

/// `BC_p(K ∋ p̄)`, membership decided exactly on the stored endpoints.
pub fn coverage_at(region: &ConfidenceRegion, p: &PVector) -> Result<f64> {
    if p.len() != region.n() {
        return Err(domain(format!(
            "parameter vector has length {}, region has n = {}",
            p.len(),
            region.n()
        )));
    }
    let pi = p.mean();
    let xs: Vec<usize> = (0..=region.n())
        .filter(|&x| region.value(x).contains(pi))
        .collect();
    pb_prob(p, &xs)
}

/// Coverage of `π` under `δ_r * B(s, a)`.
pub fn config_coverage(region: &ConfidenceRegion, cfg: &ThreePointConfig, pi: f64) -> Result<f64> {
    let n = region.n();
    if cfg.n != n {
        return Err(domain(format!(
            "config has n = {}, region has n = {n}",
            cfg.n
        )));
    }
    if (cfg.r as f64 + cfg.s as f64 * cfg.a - n as f64 * pi).abs() > MEAN_TOL * n.max(1) as f64 {
        return Err(domain(format!(
            "config mean {} does not match π = {pi}",
            cfg.mean()
        )));
    }
    let acc = region.acceptance(pi);
    Ok(window_coverage(&acc, cfg.r, cfg.s, cfg.a))
}

/// Probability that `r + B(s, a)` lands in an accepted `x`.
fn window_coverage(acc: &[bool], r: usize, s: usize, a: f64) -> f64 {
    let window = &acc[r..=r + s];
    let mut total = 0.0;
    let mut j = 0;
    while j <= s {
        if !window[j] {
            j += 1;
            continue;
        }
        let u = j;
        while j <= s && window[j] {
            j += 1;
        }
        total += run_mass(s, a, u, j - 1);
    }
    total.clamp(0.0, 1.0)
}

/// `P(u <= B <= v)` for `B ~ B(s, a)`.
fn run_mass(s: usize, a: f64, u: usize, v: usize) -> f64 {
    let below = split_tails(s, a, u).0;
    let above = split_tails(s, a, v + 1).1;
    (1.0 - below - above).max(0.0)
}

/// Exact minimum of the coverage of `π` over all three-point configurations
/// with mean `π`. Ties keep the first configuration in `(r, s)` order.
pub fn min_coverage_at_mean(region: &ConfidenceRegion, pi: f64) -> Result<CoverageReport> {
    if !(0.0..=1.0).contains(&pi) {
        return Err(domain(format!("mean {pi} is not in [0, 1]")));
    }
    let (cov, cfg) = min_over_configs(region, pi);
    Ok(CoverageReport::new(
        cov,
        cfg,
        pi,
        GridInfo::single(),
        region.beta(),
    ))
}

pub(crate) fn min_over_configs(region: &ConfidenceRegion, pi: f64) -> (f64, ThreePointConfig) {
    let n = region.n();
    let acc = region.acceptance(pi);
    let mut prefix = Vec::with_capacity(n + 2);
    prefix.push(0usize);
    for &b in &acc {
        prefix.push(prefix.last().unwrap() + b as usize);
    }
    let accepted = |lo: usize, hi: usize| prefix[hi + 1] - prefix[lo];

    let target = n as f64 * pi;
    let tol = MEAN_TOL * n.max(1) as f64;
    let mut best = (
        f64::INFINITY,
        ThreePointConfig {
            n,
            r: 0,
            s: 0,
            a: 0.0,
        },
    );
    let consider = |best: &mut (f64, ThreePointConfig), cov: f64, r: usize, s: usize, a: f64| {
        if cov < best.0 {
            *best = (cov, ThreePointConfig { n, r, s, a });
        }
    };

    let r_max = ((target + tol).floor() as usize).min(n);
    for r in 0..=r_max {
        if (target - r as f64).abs() <= tol {
            consider(&mut best, if acc[r] { 1.0 } else { 0.0 }, r, 0, 0.0);
        }
        let excess = target - r as f64;
        let s_min = ((excess - tol).ceil().max(1.0)) as usize;
        for s in s_min..=(n - r) {
            let a = (excess / s as f64).clamp(0.0, 1.0);
            let hits = accepted(r, r + s);
            let cov = if hits == s + 1 {
                1.0
            } else if hits == 0 {
                0.0
            } else {
                window_coverage(&acc, r, s, a)
            };
            consider(&mut best, cov, r, s, a);
        }
        if best.0 == 0.0 {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intervals::optimal_upray;
    use crate::inverse::{cp_upray, g_inverse};

    #[test]
    fn config_basics() {
        let c = ThreePointConfig::new(4, 1, 2, 0.25).unwrap();
        assert_eq!(c.mean(), 0.375);
        assert_eq!(c.to_pvector().unwrap().as_slice(), &[1.0, 0.25, 0.25, 0.0]);
        assert!(ThreePointConfig::new(2, 2, 1, 0.5).is_err());
        assert!(ThreePointConfig::new(2, 0, 1, 1.5).is_err());
    }

    #[test]
    fn trivial_region_full_coverage() {
        let k = ConfidenceRegion::trivial(3, 0.9).unwrap();
        let p = PVector::new(vec![0.1, 0.9, 0.4]).unwrap();
        assert_eq!(coverage_at(&k, &p).unwrap(), 1.0);
        assert!(coverage_at(&k, &PVector::new(vec![0.1]).unwrap()).is_err());
    }

    #[test]
    fn optimal_upray_attains_level() {
        for n in 1..=6 {
            let beta = 0.9;
            let k = optimal_upray(n, beta).unwrap().region;
            let mut p = vec![0.0; n];
            p[0] = 1.0 - beta;
            let c = coverage_at(&k, &PVector::new(p).unwrap()).unwrap();
            assert!((c - beta).abs() < 1e-12, "n={n} c={c}");
        }
    }

    #[test]
    fn cp_upray_single_spike() {
        let (n, beta) = (4, 0.9);
        let k = cp_upray(n, beta).unwrap();
        let g1 = g_inverse(n, 1, beta).unwrap();
        let mut p = vec![0.0; n];
        p[0] = n as f64 * g1;
        let c = coverage_at(&k, &PVector::new(p).unwrap()).unwrap();
        assert!((c - (1.0 - n as f64 * g1)).abs() < 1e-12);
    }

    #[test]
    fn config_coverage_cases() {
        let (n, beta) = (3, 0.9);
        let k = cp_upray(n, beta).unwrap();
        let pi = 0.3;
        let homo = config_coverage(&k, &ThreePointConfig::new(n, 0, n, pi).unwrap(), pi).unwrap();
        let acc: Vec<usize> = (0..=n).filter(|&x| k.value(x).contains(pi)).collect();
        let direct = pb_prob(&PVector::new(vec![pi; n]).unwrap(), &acc).unwrap();
        assert!((homo - direct).abs() < 1e-15);

        let pi = 2.0 / 3.0;
        let point = config_coverage(&k, &ThreePointConfig::new(n, 2, 0, 0.0).unwrap(), pi).unwrap();
        assert_eq!(point, if k.value(2).contains(pi) { 1.0 } else { 0.0 });

        let g1 = g_inverse(n, 1, beta).unwrap();
        let pi = 0.5 * (0.1 / 3.0 + g1);
        let c =
            config_coverage(&k, &ThreePointConfig::new(n, 0, 1, 3.0 * pi).unwrap(), pi).unwrap();
        assert!((c - (1.0 - 3.0 * pi)).abs() < 1e-14);

        assert!(config_coverage(&k, &ThreePointConfig::new(n, 0, 1, 0.5).unwrap(), 0.3).is_err());
    }

    #[test]
    fn min_at_zero_and_at_cp_endpoint() {
        let k = cp_upray(3, 0.9).unwrap();
        let r = min_coverage_at_mean(&k, 0.0).unwrap();
        assert_eq!(r.min_coverage, 1.0);
        assert_eq!(r.witness.mean(), 0.0);

        let g1 = g_inverse(3, 1, 0.9).unwrap();
        let r = min_coverage_at_mean(&k, g1).unwrap();
        assert!((r.min_coverage - (1.0 - 3.0 * g1)).abs() < 1e-14);
        assert!(r.violated);
        assert!((r.witness.mean() - g1).abs() < 1e-12);
        assert!(min_coverage_at_mean(&k, 1.5).is_err());
    }

    #[test]
    fn min_matches_direct_enumeration() {
        let k = optimal_upray(5, 0.8).unwrap().region;
        for i in 0..=40 {
            let pi = i as f64 / 40.0;
            let rep = min_coverage_at_mean(&k, pi).unwrap();
            let mut best = f64::INFINITY;
            for r in 0..=5usize {
                for s in 0..=(5 - r) {
                    let a = if s == 0 {
                        0.0
                    } else {
                        (5.0 * pi - r as f64) / s as f64
                    };
                    if !(0.0..=1.0).contains(&a) || (s == 0 && (5.0 * pi - r as f64).abs() > 1e-12)
                    {
                        continue;
                    }
                    let p = ThreePointConfig::new(5, r, s, a)
                        .unwrap()
                        .to_pvector()
                        .unwrap();
                    let xs: Vec<usize> = (0..=5).filter(|&x| k.value(x).contains(pi)).collect();
                    best = best.min(pb_prob(&p, &xs).unwrap());
                }
            }
            assert!((rep.min_coverage - best).abs() < 1e-12, "pi={pi}");
        }
    }
}
