//! Inversion of the binomial upper tail in its success probability, and the
//! one-sided Clopper-Pearson regions built from it.
//!
//! For `1 <= x <= n` the tail `p -> P_p(X >= x)` is continuous and strictly
//! increasing from 0 to 1, so `g_{n,β}(x)`, the `p` at which it equals
//! `1 - β`, is found by plain bisection on `[0, 1]`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::distributions::tail_raw;
use crate::error::{domain, Error, Result};
use crate::interval_set::IntervalSet;
use crate::region::{reflect_region, ConfidenceRegion, RegionKind};

pub(crate) fn check_level(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("level {beta} is not in ]0, 1[")))
    }
}

/// Largest accepted `|P_g(X >= x) - (1 - β)|` at a computed root.
pub const RESIDUAL_TOL: f64 = 1e-13;

/// `g_{n,β}(x)`: the `p` with `P_p(X >= x) = 1 - β` for `X ~ B(n, p)`.
pub fn g_inverse(n: usize, x: usize, beta: f64) -> Result<f64> {
    check_level(beta)?;
    if x == 0 || x > n {
        return Err(domain(format!(
            "g is defined for x in 1..={n}, got x = {x}"
        )));
    }
    let target = 1.0 - beta;
    let g = solve_tail(n, x, target);
    let residual = (tail_raw(n, g, x) - target).abs();
    if residual > RESIDUAL_TOL {
        return Err(Error::Numeric(format!(
            "tail residual {residual:e} at g_{{{n},{beta}}}({x}) = {g}"
        )));
    }
    Ok(g)
}

/// Bisection down to about one ulp of the root; returns whichever end of
/// the final bracket has the smaller residual.
pub(crate) fn solve_tail(n: usize, x: usize, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= f64::EPSILON * mid {
            break;
        }
        if tail_raw(n, mid, x) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r_lo = (tail_raw(n, lo, x) - target).abs();
    let r_hi = (tail_raw(n, hi, x) - target).abs();
    if r_lo < r_hi {
        lo
    } else {
        hi
    }
}

/// `g_{n,β}(1), ..., g_{n,β}(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GTable {
    n: usize,
    beta: f64,
    g: Vec<f64>,
    tol: f64,
}

impl GTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `g(x)` for `1 <= x <= n`.
    pub fn get(&self, x: usize) -> f64 {
        self.g[x - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.g
    }

    /// Largest tail residual `|P_g(X >= x) - (1 - β)|` over the table.
    pub fn tol(&self) -> f64 {
        self.tol
    }
}

pub fn g_table(n: usize, beta: f64) -> Result<GTable> {
    check_level(beta)?;
    if n == 0 {
        return Err(domain("g_table needs n >= 1"));
    }
    let target = 1.0 - beta;
    let g: Vec<f64> = (1..=n).map(|x| solve_tail(n, x, target)).collect();
    if let Some(x) = (1..n).find(|&x| g[x - 1] >= g[x]) {
        return Err(Error::Consistency(format!(
            "g_{{{n},{beta}}} not strictly increasing at x = {x}: {} >= {}",
            g[x - 1],
            g[x]
        )));
    }
    let tol = g
        .iter()
        .enumerate()
        .map(|(i, &p)| (tail_raw(n, p, i + 1) - target).abs())
        .fold(0.0, f64::max);
    if tol > RESIDUAL_TOL {
        return Err(Error::Numeric(format!(
            "tail residual {tol:e} in g_{{{n},{beta}}} exceeds {RESIDUAL_TOL:e}"
        )));
    }
    Ok(GTable { n, beta, g, tol })
}

/// Shared memo of [`GTable`]s keyed by `(n, β)`.
#[derive(Debug, Default)]
pub struct GCache {
    tables: Mutex<HashMap<(usize, u64), Arc<GTable>>>,
}

impl GCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: usize, beta: f64) -> Result<Arc<GTable>> {
        let key = (n, beta.to_bits());
        if let Some(t) = self.tables.lock().expect("cache poisoned").get(&key) {
            return Ok(Arc::clone(t));
        }
        // computed unlocked; a concurrent duplicate just overwrites an equal table
        let table = Arc::new(g_table(n, beta)?);
        self.tables
            .lock()
            .expect("cache poisoned")
            .insert(key, Arc::clone(&table));
        Ok(table)
    }

    /// Tables for every `m` in `1..=n`, filled in parallel.
    pub fn get_all(&self, n: usize, beta: f64) -> Result<Vec<Arc<GTable>>> {
        (1..=n).into_par_iter().map(|m| self.get(m, beta)).collect()
    }
}

/// Clopper-Pearson upray: `[0, 1]` at `x = 0`, `]g_n(x), 1]` otherwise.
pub fn cp_upray(n: usize, beta: f64) -> Result<ConfidenceRegion> {
    check_level(beta)?;
    if n == 0 {
        return ConfidenceRegion::new(beta, RegionKind::Upray, vec![IntervalSet::unit()]);
    }
    cp_upray_from_table(&g_table(n, beta)?)
}

pub(crate) fn cp_upray_cached(n: usize, beta: f64, cache: &GCache) -> Result<ConfidenceRegion> {
    check_level(beta)?;
    if n == 0 {
        return ConfidenceRegion::new(beta, RegionKind::Upray, vec![IntervalSet::unit()]);
    }
    let table = cache.get(n, beta)?;
    cp_upray_from_table(&table)
}

fn cp_upray_from_table(table: &GTable) -> Result<ConfidenceRegion> {
    let mut values = Vec::with_capacity(table.n + 1);
    values.push(IntervalSet::unit());
    for &g in &table.g {
        values.push(IntervalSet::upray(g, false)?);
    }
    ConfidenceRegion::new(table.beta, RegionKind::Upray, values)
}

/// Clopper-Pearson downray `x -> 1 - K_CP(n - x)`.
pub fn cp_downray(n: usize, beta: f64) -> Result<ConfidenceRegion> {
    Ok(reflect_region(&cp_upray(n, beta)?))
}

pub(crate) fn cp_downray_cached(n: usize, beta: f64, cache: &GCache) -> Result<ConfidenceRegion> {
    Ok(reflect_region(&cp_upray_cached(n, beta, cache)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{beta_threshold, binom_tail, BinomialParams};
    use crate::region::region_subset;

    #[test]
    fn closed_form_ends() {
        for &beta in &[0.5, 0.9, 0.99] {
            assert!((g_inverse(1, 1, beta).unwrap() - (1.0 - beta)).abs() < 1e-15);
        }
        let g = g_inverse(4, 1, 0.9).unwrap();
        assert!((g - (1.0 - 0.9f64.powf(0.25))).abs() < 1e-14);
        assert!((g - 0.02599625).abs() < 1e-8);
        let g = g_inverse(3, 3, 0.95).unwrap();
        assert!((g - 0.05f64.powf(1.0 / 3.0)).abs() < 1e-14);
        assert!((g - 0.36840315).abs() < 1e-8);
    }

    #[test]
    fn domain_errors() {
        assert!(g_inverse(3, 0, 0.9).is_err());
        assert!(g_inverse(3, 4, 0.9).is_err());
        assert!(g_inverse(3, 1, 1.0).is_err());
        assert!(g_table(0, 0.9).is_err());
    }

    #[test]
    fn small_tables() {
        let t = g_table(1, 0.9).unwrap();
        assert!((t.get(1) - 0.1).abs() < 1e-15);
        let t = g_table(2, 0.9).unwrap();
        assert!((t.get(1) - (1.0 - 0.9f64.sqrt())).abs() < 1e-15);
        assert!((t.get(2) - 0.1f64.sqrt()).abs() < 1e-15);
        assert!((t.get(1) - 0.05131670).abs() < 1e-8);
        assert!((t.get(2) - 0.31622777).abs() < 1e-8);
    }

    #[test]
    fn residuals_small() {
        for n in (1..=500).step_by(7) {
            for &beta in &[0.8, 0.9, 0.95, 0.99] {
                let t = g_table(n, beta).unwrap();
                assert!(t.tol() <= 1e-13, "n={n} beta={beta} tol={}", t.tol());
                for x in 1..=n {
                    let r = binom_tail(BinomialParams::new(n, t.get(x)).unwrap(), x).unwrap();
                    assert!((r - (1.0 - beta)).abs() <= 1e-13);
                }
            }
        }
    }

    #[test]
    fn decreasing_in_level() {
        for n in [1usize, 2, 5, 17, 60] {
            let betas = [0.5, 0.8, 0.9, 0.95, 0.99];
            let tables: Vec<_> = betas.iter().map(|&b| g_table(n, b).unwrap()).collect();
            for w in tables.windows(2) {
                for x in 1..=n {
                    assert!(w[0].get(x) > w[1].get(x), "n={n} x={x}");
                }
            }
        }
    }

    #[test]
    fn agnew_bound_lemma() {
        for n in 2..=500 {
            let bn = beta_threshold(n).unwrap();
            for &beta in &[bn, 0.9, 0.95, 0.99] {
                let t = g_table(n, beta).unwrap();
                for x in 2..=n {
                    if beta == bn && x == 2 {
                        // P_{1/n}(X >= 2) = 1 - β_n, so this case is an equality
                        assert!((t.get(2) * n as f64 - 1.0).abs() < 1e-13, "n={n}");
                        continue;
                    }
                    assert!(
                        t.get(x) <= (x - 1) as f64 / n as f64,
                        "n={n} beta={beta} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn cp_regions() {
        let r = cp_upray(2, 0.9).unwrap();
        assert_eq!(r.value(0), &IntervalSet::unit());
        assert!(!r.value(1).contains(1.0 - 0.9f64.sqrt() - 1e-12));
        assert!(r.value(1).contains(0.0514));
        assert_eq!(
            r.value(1).to_string(),
            format!("]{}, 1]", g_inverse(2, 1, 0.9).unwrap())
        );
        for x in 1..=2 {
            assert!(r.value(x).is_proper_subset(r.value(x - 1)));
        }

        let d = cp_downray(2, 0.9).unwrap();
        assert_eq!(d.kind(), RegionKind::Downray);
        assert_eq!(d.value(2), &IntervalSet::unit());
        let b = d.value(0).supremum().unwrap();
        assert!(!b.is_closed());
        assert!((b.value() - (1.0 - 0.1f64.sqrt())).abs() < 1e-15);
        assert!((b.value() - 0.68377223).abs() < 1e-8);

        let d1 = cp_downray(1, 0.9).unwrap();
        assert!((d1.value(0).supremum().unwrap().value() - 0.9).abs() < 1e-15);

        let zero = cp_upray(0, 0.9).unwrap();
        assert_eq!(zero.n(), 0);
        assert_eq!(zero.value(0), &IntervalSet::unit());
    }

    #[test]
    fn downray_is_isotone() {
        let d = cp_downray(7, 0.9).unwrap();
        for x in 1..=7 {
            assert!(d.value(x - 1).is_proper_subset(d.value(x)));
        }
        assert_eq!(reflect_region(&d), cp_upray(7, 0.9).unwrap());
    }

    #[test]
    fn cache_returns_same_table() {
        let cache = GCache::new();
        let a = cache.get(9, 0.9).unwrap();
        let b = cache.get(9, 0.9).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(*a, g_table(9, 0.9).unwrap());
        let all = cache.get_all(5, 0.95).unwrap();
        assert_eq!(all.len(), 5);
        assert_eq!(all[4].n(), 5);
        let r = region_subset(
            &cp_upray(5, 0.9).unwrap(),
            &cp_upray_cached(5, 0.9, &cache).unwrap(),
        );
        assert!(r.unwrap().holds);
    }
}
