//! Confidence regions: maps from the observed count `x ∈ {0, ..., n}` to
//! subsets of `[0, 1]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::interval_set::IntervalSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionKind {
    Upray,
    Downray,
    TwoSided,
    General,
}

impl RegionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionKind::Upray => "upray",
            RegionKind::Downray => "downray",
            RegionKind::TwoSided => "two-sided",
            RegionKind::General => "general",
        }
    }

    /// Kind of the region `x -> 1 - K(n - x)`.
    pub fn reflected(self) -> Self {
        match self {
            RegionKind::Upray => RegionKind::Downray,
            RegionKind::Downray => RegionKind::Upray,
            other => other,
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RegionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upray" => Ok(RegionKind::Upray),
            "downray" => Ok(RegionKind::Downray),
            "two-sided" => Ok(RegionKind::TwoSided),
            "general" => Ok(RegionKind::General),
            other => Err(domain(format!("unknown region kind {other:?}"))),
        }
    }
}

/// A region `K: {0, ..., n} -> 2^[0,1]` at nominal level `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceRegion {
    n: usize,
    beta: f64,
    kind: RegionKind,
    values: Vec<IntervalSet>,
}

impl ConfidenceRegion {
    pub fn new(beta: f64, kind: RegionKind, values: Vec<IntervalSet>) -> Result<Self> {
        if values.is_empty() {
            return Err(domain("a region needs a value for every x in 0..=n"));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(domain(format!("level {beta} is not in ]0, 1[")));
        }
        let shape_ok = match kind {
            RegionKind::Upray => values.iter().all(IntervalSet::is_upray),
            RegionKind::Downray => values.iter().all(IntervalSet::is_downray),
            RegionKind::TwoSided | RegionKind::General => true,
        };
        if !shape_ok {
            return Err(domain(format!(
                "region values do not all have {kind} shape"
            )));
        }
        Ok(Self {
            n: values.len() - 1,
            beta,
            kind,
            values,
        })
    }

    /// The region with `[0, 1]` at every `x`.
    pub fn trivial(n: usize, beta: f64) -> Result<Self> {
        Self::new(beta, RegionKind::General, vec![IntervalSet::unit(); n + 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn kind(&self) -> RegionKind {
        self.kind
    }

    pub fn values(&self) -> &[IntervalSet] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &IntervalSet {
        &self.values[x]
    }

    pub(crate) fn replace_value(&mut self, x: usize, value: IntervalSet) {
        self.values[x] = value;
    }

    /// `{x : π ∈ K(x)}`, indexed by `x`.
    pub fn acceptance(&self, pi: f64) -> Vec<bool> {
        self.values.iter().map(|v| v.contains(pi)).collect()
    }

    /// Every endpoint value appearing in the region.
    pub fn endpoint_values(&self) -> Vec<f64> {
        self.values
            .iter()
            .flat_map(|v| v.endpoint_values().collect::<Vec<_>>())
            .collect()
    }
}

/// `x -> {1 - t : t ∈ K(n - x)}`. Exact involution.
pub fn reflect_region(region: &ConfidenceRegion) -> ConfidenceRegion {
    ConfidenceRegion {
        n: region.n,
        beta: region.beta,
        kind: region.kind.reflected(),
        values: region
            .values
            .iter()
            .rev()
            .map(IntervalSet::reflect)
            .collect(),
    }
}

/// Pointwise intersection `x -> A(x) ∩ B(x)`.
pub fn intersect_regions(
    a: &ConfidenceRegion,
    b: &ConfidenceRegion,
    beta: f64,
    kind: RegionKind,
) -> Result<ConfidenceRegion> {
    if a.n != b.n {
        return Err(domain(format!("region sizes differ: {} vs {}", a.n, b.n)));
    }
    let values = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(u, v)| u.intersect(v))
        .collect();
    ConfidenceRegion::new(beta, kind, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetCheck {
    pub holds: bool,
    /// Smallest `x` with `A(x) ⊄ B(x)`.
    pub first_violation: Option<usize>,
    /// Whether `A(x) ⊊ B(x)` at every `x`.
    pub strict_everywhere: bool,
}

/// Pointwise inclusion `A(x) ⊆ B(x)` for all `x`.
pub fn region_subset(a: &ConfidenceRegion, b: &ConfidenceRegion) -> Result<SubsetCheck> {
    if a.n != b.n {
        return Err(domain(format!("region sizes differ: {} vs {}", a.n, b.n)));
    }
    let first_violation = (0..=a.n).find(|&x| !a.values[x].is_subset(&b.values[x]));
    let strict_everywhere =
        first_violation.is_none() && a.values.iter().zip(&b.values).all(|(u, v)| u != v);
    Ok(SubsetCheck {
        holds: first_violation.is_none(),
        first_violation,
        strict_everywhere,
    })
}
