//! JSON form of a [`ConfidenceRegion`].
//!
//! Every real is written with 17 significant digits, so a document parses
//! back to the same doubles and re-serializes to the same bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{domain, Result};
use crate::interval_set::{Bound, Interval, IntervalSet};
use crate::region::{ConfidenceRegion, RegionKind};

pub const SCHEMA_VERSION: &str = "1";

fn exact_f64<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw = RawValue::from_string(format!("{v:.16e}")).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundDoc {
    #[serde(serialize_with = "exact_f64")]
    pub value: f64,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalDoc {
    pub x: usize,
    pub lower: BoundDoc,
    pub upper: BoundDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionDocument {
    pub schema_version: String,
    pub n: usize,
    #[serde(serialize_with = "exact_f64")]
    pub beta: f64,
    pub kind: String,
    /// One entry per component; an `x` without entries has the empty set.
    pub intervals: Vec<IntervalDoc>,
}

fn bound_doc(b: Bound) -> BoundDoc {
    BoundDoc {
        value: b.value(),
        closed: b.is_closed(),
    }
}

impl RegionDocument {
    pub fn from_region(region: &ConfidenceRegion) -> Self {
        let intervals = region
            .values()
            .iter()
            .enumerate()
            .flat_map(|(x, v)| {
                v.parts().iter().map(move |iv| IntervalDoc {
                    x,
                    lower: bound_doc(iv.lower()),
                    upper: bound_doc(iv.upper()),
                })
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            n: region.n(),
            beta: region.beta(),
            kind: region.kind().as_str().to_string(),
            intervals,
        }
    }

    pub fn to_region(&self) -> Result<ConfidenceRegion> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(domain(format!(
                "unsupported schema version {:?}",
                self.schema_version
            )));
        }
        let kind: RegionKind = self.kind.parse()?;
        let mut parts: BTreeMap<usize, Vec<Interval>> = BTreeMap::new();
        for iv in &self.intervals {
            if iv.x > self.n {
                return Err(domain(format!(
                    "interval at x = {} beyond n = {}",
                    iv.x, self.n
                )));
            }
            let lower = Bound::new(iv.lower.value, iv.lower.closed)?;
            let upper = Bound::new(iv.upper.value, iv.upper.closed)?;
            let interval = Interval::new(lower, upper)
                .ok_or_else(|| domain(format!("empty or reversed interval at x = {}", iv.x)))?;
            parts.entry(iv.x).or_default().push(interval);
        }
        let values = (0..=self.n)
            .map(|x| IntervalSet::from_intervals(parts.remove(&x).unwrap_or_default()))
            .collect();
        ConfidenceRegion::new(self.beta, kind, values)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| domain(format!("malformed region document: {e}")))
    }
}
