use std::sync::Arc;

use crate::distributions::beta_threshold;
use crate::error::{domain, Error, Result};
use crate::interval_set::{affine_point, IntervalSet};
use crate::inverse::{check_level, solve_tail, GCache, GTable};
use crate::region::{reflect_region, ConfidenceRegion, RegionKind};

/// Agreement required between exhaustive minimization and the closed form.
const FAST_PATH_TOL: f64 = 1e-11;

#[derive(Debug, Clone)]
pub struct OptimalUprayResult {
    pub region: ConfidenceRegion,
    /// Lower endpoint `g(x)` for `x = 1..=n` (index `x - 1`).
    pub g_values: Vec<f64>,
    /// `β >= β_n`, so that `g(1) = (1-β)/n` and `g(x) = g_n(x)` for `x >= 2`;
    /// checked against the exhaustive values.
    pub fast_path_used: bool,
    /// Minimizing `(l, m)` for each `x = 1..=n`, ties to smaller `l` then `m`.
    pub argmin: Vec<(usize, usize)>,
}

impl OptimalUprayResult {
    pub fn lower_endpoint(&self, x: usize) -> f64 {
        self.g_values[x - 1]
    }
}

/// Optimal isotone `β`-confidence upray for the mean of a length-`n` chain.
pub fn optimal_upray(n: usize, beta: f64) -> Result<OptimalUprayResult> {
    optimal_upray_with(n, beta, &GCache::new())
}

pub fn optimal_upray_with(n: usize, beta: f64, cache: &GCache) -> Result<OptimalUprayResult> {
    check_level(beta)?;
    if n == 0 {
        return Err(domain("optimal_upray needs n >= 1"));
    }
    let tables = cache.get_all(n, beta)?;
    let table = |m: usize| -> &Arc<GTable> { &tables[m - 1] };

    let mut g_values = Vec::with_capacity(n);
    let mut argmin = Vec::with_capacity(n);
    for x in 1..=n {
        let (g, at) = minimize(n, x, |m, k| table(m).get(k));
        g_values.push(g);
        argmin.push(at);
    }

    if let Some(x) = (2..=n).find(|&x| g_values[x - 1] <= g_values[x - 2]) {
        return Err(Error::Consistency(format!(
            "optimal upray not strictly isotone at x = {x} (n = {n}, β = {beta})"
        )));
    }

    let fast_path_used = beta >= beta_threshold(n)?;
    if fast_path_used {
        let top = table(n);
        let closed_form = |x: usize| {
            if x == 1 {
                (1.0 - beta) / n as f64
            } else {
                top.get(x)
            }
        };
        if let Some(x) = (1..=n).find(|&x| (g_values[x - 1] - closed_form(x)).abs() > FAST_PATH_TOL)
        {
            return Err(Error::Consistency(format!(
                "exhaustive g({x}) = {} disagrees with closed form {} (n = {n}, β = {beta})",
                g_values[x - 1],
                closed_form(x)
            )));
        }
    }

    let mut values = Vec::with_capacity(n + 1);
    values.push(IntervalSet::unit());
    for &g in &g_values {
        values.push(IntervalSet::upray(g, false)?);
    }
    Ok(OptimalUprayResult {
        region: ConfidenceRegion::new(beta, RegionKind::Upray, values)?,
        g_values,
        fast_path_used,
        argmin,
    })
}

/// `g(x)` alone, solving only the `g_m(k)` with `k <= x` that it needs.
pub fn optimal_lower_endpoint(n: usize, x: usize, beta: f64) -> Result<(f64, (usize, usize))> {
    check_level(beta)?;
    if x == 0 || x > n {
        return Err(domain(format!("x = {x} outside 1..={n}")));
    }
    let target = 1.0 - beta;
    Ok(minimize(n, x, |m, k| solve_tail(m, k, target)))
}

/// `min_{0 <= l < x, x-l <= m <= n-l} (m g_m(x-l) + l) / n`.
fn minimize(n: usize, x: usize, g: impl Fn(usize, usize) -> f64) -> (f64, (usize, usize)) {
    let mut best = f64::INFINITY;
    let mut at = (0, n);
    for l in 0..x {
        for m in (x - l)..=(n - l) {
            let v = affine_point(g(m, x - l), m, l, n);
            if v < best {
                best = v;
                at = (l, m);
            }
        }
    }
    (best, at)
}

/// Optimal isotone downray, the reflection of [`optimal_upray`].
pub fn optimal_downray(n: usize, beta: f64) -> Result<ConfidenceRegion> {
    optimal_downray_with(n, beta, &GCache::new())
}

pub fn optimal_downray_with(n: usize, beta: f64, cache: &GCache) -> Result<ConfidenceRegion> {
    Ok(reflect_region(&optimal_upray_with(n, beta, cache)?.region))
}
