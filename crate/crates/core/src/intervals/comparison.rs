use crate::distributions::binom_row_into;
use crate::error::{domain, Result};
use crate::interval_set::{Bound, Interval, IntervalSet};
use crate::inverse::{check_level, g_table};
use crate::region::{ConfidenceRegion, RegionKind};
use crate::sum::CompensatedSum;

use super::optimal::optimal_upray;

/// Agnew's upray `[min(g_n(x), (x-1)/n), 1]`, with `[0, 1]` at `x = 0`.
pub fn agnew_upray(n: usize, beta: f64) -> Result<ConfidenceRegion> {
    check_level(beta)?;
    if n == 0 {
        return Err(domain("agnew_upray needs n >= 1"));
    }
    let table = g_table(n, beta)?;
    let mut values = vec![IntervalSet::unit()];
    for x in 1..=n {
        let g = table.get(x).min((x - 1) as f64 / n as f64);
        values.push(IntervalSet::upray(g, true)?);
    }
    ConfidenceRegion::new(beta, RegionKind::Upray, values)
}

/// Grid scan settings for [`sterne_interval_with`].
#[derive(Debug, Clone, Copy)]
pub struct SterneScan {
    pub resolution: f64,
}

impl Default for SterneScan {
    fn default() -> Self {
        Self { resolution: 1e-5 }
    }
}

#[derive(Debug, Clone)]
pub struct SterneScanResult {
    pub region: ConfidenceRegion,
    /// Values of `x` whose set has more than one component.
    pub multi_component: Vec<usize>,
}

/// Sterne-type region
/// `K_S(x) = {p : B_{n,p}({k : f_p(k) <= f_p(x)}) > 1 - β}`,
/// located by a grid scan with each boundary bisected down to adjacent
/// doubles. The last excluded double becomes an open endpoint, and so do
/// boundaries that are closed in the real line; at double resolution both
/// describe the same set.
pub fn sterne_interval(n: usize, beta: f64) -> Result<ConfidenceRegion> {
    Ok(sterne_interval_with(n, beta, SterneScan::default())?.region)
}

pub fn sterne_interval_with(n: usize, beta: f64, scan: SterneScan) -> Result<SterneScanResult> {
    check_level(beta)?;
    if !(scan.resolution > 0.0 && scan.resolution <= 0.5) {
        return Err(domain(format!(
            "scan resolution {} is not in ]0, 0.5]",
            scan.resolution
        )));
    }
    let steps = (1.0 / scan.resolution).ceil() as usize;
    let grid = |i: usize| {
        if i == steps {
            1.0
        } else {
            i as f64 / steps as f64
        }
    };
    let alpha = 1.0 - beta;

    let mut row = SterneRow::new(n);

    // per x: start of the current run of accepted grid points, and finished runs
    let mut open_run: Vec<Option<Bound>> = vec![None; n + 1];
    let mut runs: Vec<Vec<Interval>> = vec![Vec::new(); n + 1];
    let mut prev: Vec<bool> = vec![false; n + 1];

    for i in 0..=steps {
        let p = grid(i);
        row.eval(p);
        for x in 0..=n {
            let now = row.accepts(x, alpha);
            if i == 0 {
                if now {
                    open_run[x] = Some(Bound::unchecked(0.0, true));
                }
            } else if now != prev[x] {
                let (before, after) = refine(n, x, alpha, grid(i - 1), p, prev[x]);
                if now {
                    // entering: last rejected double is an open lower end
                    open_run[x] = Some(Bound::unchecked(before, false));
                } else {
                    let lower = open_run[x].take().expect("run started");
                    if let Some(iv) = Interval::new(lower, Bound::unchecked(after, false)) {
                        runs[x].push(iv);
                    }
                }
            }
            prev[x] = now;
        }
    }
    for x in 0..=n {
        if let Some(lower) = open_run[x].take() {
            if let Some(iv) = Interval::new(lower, Bound::unchecked(1.0, true)) {
                runs[x].push(iv);
            }
        }
    }

    let values: Vec<IntervalSet> = runs.into_iter().map(IntervalSet::from_intervals).collect();
    let multi_component = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.parts().len() > 1)
        .map(|(x, _)| x)
        .collect();
    Ok(SterneScanResult {
        region: ConfidenceRegion::new(beta, RegionKind::General, values)?,
        multi_component,
    })
}

/// `B(n, p)` masses with ascending prefix sums, so that the mass of
/// `{k : f(k) <= f(x)}` is one lookup.
struct SterneRow {
    n: usize,
    row: Vec<f64>,
    sorted: Vec<f64>,
    prefix: Vec<f64>,
}

impl SterneRow {
    fn new(n: usize) -> Self {
        Self {
            n,
            row: Vec::with_capacity(n + 1),
            sorted: Vec::with_capacity(n + 1),
            prefix: Vec::with_capacity(n + 2),
        }
    }

    fn eval(&mut self, p: f64) {
        binom_row_into(self.n, p, &mut self.row);
        self.sorted.clear();
        self.sorted.extend_from_slice(&self.row);
        self.sorted.sort_by(f64::total_cmp);
        self.prefix.clear();
        self.prefix.push(0.0);
        let mut acc = CompensatedSum::default();
        for &f in &self.sorted {
            acc.add(f);
            self.prefix.push(acc.total());
        }
    }

    fn accepts(&self, x: usize, alpha: f64) -> bool {
        let fx = self.row[x];
        let count = self.sorted.partition_point(|&f| f <= fx);
        self.prefix[count] > alpha
    }
}

/// Bisects between `a` (predicate value `at_a`) and `b` (the opposite) until
/// they are adjacent doubles; returns the final `(a, b)`.
fn refine(n: usize, x: usize, alpha: f64, mut a: f64, mut b: f64, at_a: bool) -> (f64, f64) {
    let mut row = SterneRow::new(n);
    loop {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return (a, b);
        }
        row.eval(mid);
        if row.accepts(x, alpha) == at_a {
            a = mid;
        } else {
            b = mid;
        }
    }
}

/// The optimal upray with `K(0)` shrunk to `[0, c]`,
/// `c = max(inf K(n), 1 - (1-β)^{1/n})`; still a valid `β`-region, which
/// shows the optimal upray is not admissible among all intervals.
pub fn kstar_example(n: usize, beta: f64) -> Result<ConfidenceRegion> {
    let opt = optimal_upray(n, beta)?;
    let inf_top = opt
        .region
        .value(n)
        .infimum()
        .map(|b| b.value())
        .unwrap_or(1.0);
    let c = inf_top.max(1.0 - (1.0 - beta).powf(1.0 / n as f64));
    let mut region = opt.region;
    region = ConfidenceRegion::new(beta, RegionKind::General, region.values().to_vec())?;
    region.replace_value(0, IntervalSet::downray(c, true)?);
    Ok(region)
}
