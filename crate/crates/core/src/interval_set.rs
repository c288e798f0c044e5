//! Finite unions of possibly half-open subintervals of `[0, 1]`.
//!
//! Membership and inclusion use exact comparisons of the stored endpoint
//! values; no tolerance is applied anywhere in this module.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{domain, Result};

/// Interval endpoint: a value in `[0, 1]` plus an open/closed flag.
///
/// A bound produced by reflection remembers the value it was reflected from,
/// so `t -> 1 - t` applied twice returns the original bits.
#[derive(Debug, Clone, Copy)]
pub struct Bound {
    raw: f64,
    closed: bool,
    reflected: bool,
}

impl Bound {
    pub fn new(value: f64, closed: bool) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(domain(format!("endpoint {value} is not in [0, 1]")));
        }
        Ok(Self {
            raw: value,
            closed,
            reflected: false,
        })
    }

    pub fn closed(value: f64) -> Result<Self> {
        Self::new(value, true)
    }

    pub fn open(value: f64) -> Result<Self> {
        Self::new(value, false)
    }

    pub(crate) fn unchecked(value: f64, closed: bool) -> Self {
        debug_assert!((0.0..=1.0).contains(&value), "endpoint {value}");
        Self {
            raw: value,
            closed,
            reflected: false,
        }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        if self.reflected {
            1.0 - self.raw
        } else {
            self.raw
        }
    }

    #[inline]
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Image under `t -> 1 - t`, same flag.
    pub fn reflect(&self) -> Self {
        Self {
            raw: self.raw,
            closed: self.closed,
            reflected: !self.reflected,
        }
    }

    /// Image under the increasing map `t -> f(t)`, same flag.
    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::unchecked(f(self.value()).clamp(0.0, 1.0), self.closed)
    }
}

impl PartialEq for Bound {
    fn eq(&self, other: &Self) -> bool {
        self.value() == other.value() && self.closed == other.closed
    }
}

/// Nonempty interval `lower .. upper` with flagged endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lower: Bound,
    upper: Bound,
}

impl Interval {
    /// `None` when the endpoints describe the empty set.
    pub fn new(lower: Bound, upper: Bound) -> Option<Self> {
        let (a, b) = (lower.value(), upper.value());
        if a < b || (a == b && lower.closed && upper.closed) {
            Some(Self { lower, upper })
        } else {
            None
        }
    }

    pub fn closed(a: f64, b: f64) -> Result<Self> {
        Self::checked(Bound::closed(a)?, Bound::closed(b)?)
    }

    pub fn point(a: f64) -> Result<Self> {
        Self::closed(a, a)
    }

    /// `]a, b]`
    pub fn open_closed(a: f64, b: f64) -> Result<Self> {
        Self::checked(Bound::open(a)?, Bound::closed(b)?)
    }

    /// `[a, b[`
    pub fn closed_open(a: f64, b: f64) -> Result<Self> {
        Self::checked(Bound::closed(a)?, Bound::open(b)?)
    }

    pub fn open(a: f64, b: f64) -> Result<Self> {
        Self::checked(Bound::open(a)?, Bound::open(b)?)
    }

    fn checked(lower: Bound, upper: Bound) -> Result<Self> {
        Self::new(lower, upper).ok_or_else(|| {
            domain(format!(
                "empty interval from {} to {}",
                lower.value(),
                upper.value()
            ))
        })
    }

    pub fn lower(&self) -> Bound {
        self.lower
    }

    pub fn upper(&self) -> Bound {
        self.upper
    }

    pub fn is_point(&self) -> bool {
        self.lower.value() == self.upper.value()
    }

    pub fn contains(&self, t: f64) -> bool {
        let (a, b) = (self.lower.value(), self.upper.value());
        let above = a < t || (a == t && self.lower.closed);
        let below = t < b || (t == b && self.upper.closed);
        above && below
    }

    /// `other ⊆ self`
    pub fn includes(&self, other: &Interval) -> bool {
        lower_cmp(&self.lower, &other.lower) != Ordering::Greater
            && upper_cmp(&self.upper, &other.upper) != Ordering::Less
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lower = if lower_cmp(&self.lower, &other.lower) == Ordering::Greater {
            self.lower
        } else {
            other.lower
        };
        let upper = if upper_cmp(&self.upper, &other.upper) == Ordering::Less {
            self.upper
        } else {
            other.upper
        };
        Interval::new(lower, upper)
    }

    pub fn reflect(&self) -> Interval {
        Interval {
            lower: self.upper.reflect(),
            upper: self.lower.reflect(),
        }
    }

    /// Image under an increasing map; `None` if rounding collapses an open
    /// interval to nothing.
    fn map(&self, f: impl Fn(f64) -> f64) -> Option<Interval> {
        Interval::new(self.lower.map(&f), self.upper.map(&f))
    }
}

/// Order of lower endpoints as set boundaries: smaller value first, and at
/// equal values a closed endpoint starts earlier than an open one.
fn lower_cmp(a: &Bound, b: &Bound) -> Ordering {
    a.value()
        .total_cmp(&b.value())
        .then_with(|| b.closed.cmp(&a.closed))
}

/// Order of upper endpoints: at equal values a closed endpoint reaches further.
fn upper_cmp(a: &Bound, b: &Bound) -> Ordering {
    a.value()
        .total_cmp(&b.value())
        .then_with(|| a.closed.cmp(&b.closed))
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lower.value());
        }
        let open = if self.lower.closed { '[' } else { ']' };
        let close = if self.upper.closed { ']' } else { '[' };
        write!(
            f,
            "{open}{}, {}{close}",
            self.lower.value(),
            self.upper.value()
        )
    }
}

/// Sorted, pairwise disjoint intervals. Two pieces sharing an endpoint are
/// merged only when that endpoint belongs to the union.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `[0, 1]`
    pub fn unit() -> Self {
        Self::from(Interval {
            lower: Bound::unchecked(0.0, true),
            upper: Bound::unchecked(1.0, true),
        })
    }

    /// `]a, 1]` or `[a, 1]`.
    pub fn upray(a: f64, closed: bool) -> Result<Self> {
        let lower = Bound::new(a, closed)?;
        Ok(Interval::new(lower, Bound::unchecked(1.0, true))
            .map(Self::from)
            .unwrap_or_default())
    }

    /// `[0, b[` or `[0, b]`.
    pub fn downray(b: f64, closed: bool) -> Result<Self> {
        let upper = Bound::new(b, closed)?;
        Ok(Interval::new(Bound::unchecked(0.0, true), upper)
            .map(Self::from)
            .unwrap_or_default())
    }

    /// Union of arbitrary intervals, normalized.
    pub fn from_intervals<I: IntoIterator<Item = Interval>>(intervals: I) -> Self {
        let mut items: Vec<Interval> = intervals.into_iter().collect();
        items.sort_by(|a, b| lower_cmp(&a.lower, &b.lower));
        let mut parts: Vec<Interval> = Vec::with_capacity(items.len());
        for next in items {
            match parts.last_mut() {
                Some(cur) if touches(cur, &next) => {
                    if upper_cmp(&next.upper, &cur.upper) == Ordering::Greater {
                        cur.upper = next.upper;
                    }
                }
                _ => parts.push(next),
            }
        }
        Self { parts }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.parts.iter().any(|iv| iv.contains(t))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        Self::from_intervals(self.parts.iter().chain(other.parts.iter()).copied())
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        Self::from_intervals(out)
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        // components of `other` are maximal, so each connected piece of
        // `self` must sit inside a single one of them
        self.parts
            .iter()
            .all(|a| other.parts.iter().any(|b| b.includes(a)))
    }

    pub fn is_proper_subset(&self, other: &IntervalSet) -> bool {
        self.is_subset(other) && self != other
    }

    /// `{1 - t : t ∈ self}`.
    pub fn reflect(&self) -> IntervalSet {
        Self {
            parts: self.parts.iter().rev().map(Interval::reflect).collect(),
        }
    }

    /// `{(m t + l) / n : t ∈ self}`, the image used by the combinator.
    pub fn affine(&self, m: usize, l: usize, n: usize) -> IntervalSet {
        if self.is_empty() {
            return Self::empty();
        }
        if m == 0 {
            let at = l as f64 / n as f64;
            return Self::from(Interval {
                lower: Bound::unchecked(at, true),
                upper: Bound::unchecked(at, true),
            });
        }
        Self::from_intervals(
            self.parts
                .iter()
                .filter_map(|iv| iv.map(|t| affine_point(t, m, l, n))),
        )
    }

    /// Infimum of the set together with whether it is attained.
    pub fn infimum(&self) -> Option<Bound> {
        self.parts.first().map(|iv| iv.lower)
    }

    pub fn supremum(&self) -> Option<Bound> {
        self.parts.last().map(|iv| iv.upper)
    }

    /// Every endpoint value, in order.
    pub fn endpoint_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.parts
            .iter()
            .flat_map(|iv| [iv.lower.value(), iv.upper.value()])
    }

    /// True for `∅`, `[a, 1]` and `]a, 1]`.
    pub fn is_upray(&self) -> bool {
        match self.parts.as_slice() {
            [] => true,
            [iv] => iv.upper.value() == 1.0 && iv.upper.closed,
            _ => false,
        }
    }

    /// True for `∅`, `[0, b]` and `[0, b[`.
    pub fn is_downray(&self) -> bool {
        match self.parts.as_slice() {
            [] => true,
            [iv] => iv.lower.value() == 0.0 && iv.lower.closed,
            _ => false,
        }
    }
}

/// `(m t + l) / n`; the identity when `m = n`, so that the `(0, n)` term of
/// the combinator reproduces its input bit for bit.
#[inline]
pub(crate) fn affine_point(t: f64, m: usize, l: usize, n: usize) -> f64 {
    if m == n {
        t
    } else {
        (m as f64 * t + l as f64) / n as f64
    }
}

fn touches(cur: &Interval, next: &Interval) -> bool {
    let (end, start) = (cur.upper.value(), next.lower.value());
    start < end || (start == end && (cur.upper.closed || next.lower.closed))
}

impl From<Interval> for IntervalSet {
    fn from(iv: Interval) -> Self {
        Self { parts: vec![iv] }
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        for (i, iv) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn oc(a: f64, b: f64) -> Interval {
        Interval::open_closed(a, b).unwrap()
    }

    #[test]
    fn half_open_membership() {
        let iv = oc(0.2, 0.5);
        assert!(!iv.contains(0.2));
        assert!(iv.contains(0.5));
        assert!(iv.contains(0.3));
        assert!(!iv.contains(0.6));
    }

    #[test]
    fn empty_and_degenerate() {
        assert!(Interval::open(0.3, 0.3).is_err());
        assert!(Interval::closed_open(0.3, 0.3).is_err());
        let pt = Interval::point(0.3).unwrap();
        assert!(pt.contains(0.3));
        assert!(pt.is_point());
    }

    #[test]
    fn merge_only_when_shared_endpoint_is_covered() {
        let a = Interval::open(0.1, 0.5).unwrap();
        let b = Interval::open(0.5, 0.9).unwrap();
        let s = IntervalSet::from_intervals([a, b]);
        assert_eq!(s.parts().len(), 2);
        assert!(!s.contains(0.5));

        let a = oc(0.1, 0.5);
        let s = IntervalSet::from_intervals([a, b]);
        assert_eq!(s.parts().len(), 1);
        assert_eq!(s.to_string(), "]0.1, 0.9[");

        let s = IntervalSet::from_intervals([
            Interval::open(0.1, 0.5).unwrap(),
            Interval::point(0.5).unwrap(),
            b,
        ]);
        assert_eq!(s.parts().len(), 1);
    }

    #[test]
    fn intersection_keeps_open_side() {
        let up = IntervalSet::upray(0.2, false).unwrap();
        let down = IntervalSet::downray(0.7, false).unwrap();
        let m = up.intersect(&down);
        assert_eq!(m.to_string(), "]0.2, 0.7[");
        let touching = IntervalSet::upray(0.7, true).unwrap().intersect(&down);
        assert!(touching.is_empty());
    }

    #[test]
    fn subset_respects_flags() {
        let big = IntervalSet::upray(0.2, false).unwrap();
        let closed = IntervalSet::upray(0.2, true).unwrap();
        assert!(big.is_subset(&closed));
        assert!(!closed.is_subset(&big));
        assert!(big.is_proper_subset(&closed));
        assert!(IntervalSet::empty().is_subset(&big));
    }

    #[test]
    fn affine_identity_and_points() {
        let s = IntervalSet::upray(0.1, false).unwrap();
        assert_eq!(s.affine(3, 0, 3), s);
        let pt = IntervalSet::unit().affine(0, 2, 5);
        assert_eq!(pt.to_string(), "{0.4}");
        let shifted = IntervalSet::unit().affine(1, 1, 2);
        assert_eq!(shifted.to_string(), "[0.5, 1]");
    }

    #[test]
    fn ray_shapes() {
        assert!(IntervalSet::upray(0.3, false).unwrap().is_upray());
        assert!(IntervalSet::unit().is_upray());
        assert!(IntervalSet::unit().is_downray());
        assert!(!IntervalSet::downray(0.3, true).unwrap().is_upray());
        assert!(IntervalSet::upray(1.0, false).unwrap().is_empty());
    }

    fn arb_interval() -> impl Strategy<Value = Interval> {
        (0.0f64..=1.0, 0.0f64..=1.0, any::<bool>(), any::<bool>()).prop_filter_map(
            "empty",
            |(a, b, ca, cb)| {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                Interval::new(Bound::new(lo, ca).ok()?, Bound::new(hi, cb).ok()?)
            },
        )
    }

    fn arb_set() -> impl Strategy<Value = (Vec<Interval>, IntervalSet)> {
        proptest::collection::vec(arb_interval(), 0..6).prop_map(|v| {
            let s = IntervalSet::from_intervals(v.clone());
            (v, s)
        })
    }

    fn probes(sets: &[&IntervalSet]) -> Vec<f64> {
        let mut out = vec![0.0, 1.0, 0.5];
        for s in sets {
            for v in s.endpoint_values() {
                out.push(v);
                out.push((v - 1e-9).max(0.0));
                out.push((v + 1e-9).min(1.0));
            }
        }
        out
    }

    proptest! {
        #[test]
        fn normalized_union_matches_pointwise((raw, s) in arb_set()) {
            for w in s.parts().windows(2) {
                prop_assert!(w[0].upper().value() <= w[1].lower().value());
            }
            for t in probes(&[&s]) {
                let want = raw.iter().any(|iv| iv.contains(t));
                prop_assert_eq!(s.contains(t), want, "t = {}", t);
            }
        }

        #[test]
        fn set_operations_pointwise((_, a) in arb_set(), (_, b) in arb_set()) {
            let u = a.union(&b);
            let i = a.intersect(&b);
            for t in probes(&[&a, &b]) {
                prop_assert_eq!(u.contains(t), a.contains(t) || b.contains(t));
                prop_assert_eq!(i.contains(t), a.contains(t) && b.contains(t));
            }
            prop_assert!(i.is_subset(&a) && i.is_subset(&b));
            prop_assert!(a.is_subset(&u) && b.is_subset(&u));
        }

        #[test]
        fn reflection_is_an_exact_involution((_, a) in arb_set()) {
            let r = a.reflect();
            prop_assert_eq!(r.reflect(), a.clone());
            for t in probes(&[&a]) {
                prop_assert_eq!(r.contains(1.0 - t), a.contains(t));
            }
        }
    }
}
