use crate::error::{domain, Result};
use crate::interval_set::IntervalSet;
use crate::region::{ConfidenceRegion, RegionKind};

/// Binomial `β`-regions `K'_m` on `{0, ..., m}` for every `m = 0..=n`.
#[derive(Debug, Clone)]
pub struct CombinatorInput {
    n: usize,
    family: Vec<ConfidenceRegion>,
}

impl CombinatorInput {
    pub fn new(family: Vec<ConfidenceRegion>) -> Result<Self> {
        let Some(first) = family.first() else {
            return Err(domain("combinator family is empty"));
        };
        let beta = first.beta();
        for (m, r) in family.iter().enumerate() {
            if r.n() != m {
                return Err(domain(format!(
                    "family member {m} is defined on 0..={}, expected 0..={m}",
                    r.n()
                )));
            }
            if r.beta() != beta {
                return Err(domain(format!(
                    "family levels differ: member {m} has {} but member 0 has {beta}",
                    r.beta()
                )));
            }
        }
        Ok(Self {
            n: family.len() - 1,
            family,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.family[0].beta()
    }

    pub fn family(&self) -> &[ConfidenceRegion] {
        &self.family
    }
}

/// `K(x) = ⋃_{l ≤ x, x-l ≤ m ≤ n-l} ((m/n) K'_m(x - l) + l/n)`.
///
/// The result is valid for the mean of any Bernoulli chain of length `n` and
/// contains `K'_n(x)` at every `x`.
pub fn combine(input: &CombinatorInput) -> Result<ConfidenceRegion> {
    let n = input.n;
    if n == 0 {
        return Err(domain("combinator needs n >= 1"));
    }
    let values: Vec<IntervalSet> = (0..=n)
        .map(|x| {
            let mut pieces = Vec::new();
            for l in 0..=x {
                for m in (x - l)..=(n - l) {
                    let image = input.family[m].value(x - l).affine(m, l, n);
                    pieces.extend_from_slice(image.parts());
                }
            }
            IntervalSet::from_intervals(pieces)
        })
        .collect();
    let kind = if values.iter().all(IntervalSet::is_upray) {
        RegionKind::Upray
    } else if values.iter().all(IntervalSet::is_downray) {
        RegionKind::Downray
    } else {
        RegionKind::General
    };
    ConfidenceRegion::new(input.beta(), kind, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intervals::families;
    use crate::inverse::{cp_upray, GCache};

    #[test]
    fn validates_family() {
        assert!(CombinatorInput::new(vec![]).is_err());
        let bad_size = vec![cp_upray(1, 0.9).unwrap()];
        assert!(CombinatorInput::new(bad_size).is_err());
        let mixed = vec![cp_upray(0, 0.9).unwrap(), cp_upray(1, 0.8).unwrap()];
        assert!(CombinatorInput::new(mixed).is_err());
    }

    #[test]
    fn single_trial_cp_family() {
        let input =
            CombinatorInput::new(vec![cp_upray(0, 0.9).unwrap(), cp_upray(1, 0.9).unwrap()])
                .unwrap();
        let k = combine(&input).unwrap();
        assert_eq!(k.value(0), &IntervalSet::unit());
        // ]1-β, 1] from (0, 1) plus the point {1} from (1, 0)
        let g = crate::inverse::g_inverse(1, 1, 0.9).unwrap();
        assert_eq!(k.value(1), &IntervalSet::upray(g, false).unwrap());
        assert!((g - 0.1).abs() < 1e-15);
        assert_eq!(k.kind(), RegionKind::Upray);
    }

    #[test]
    fn trivial_family_gives_trivial_region() {
        let family = (0..=4)
            .map(|m| ConfidenceRegion::trivial(m, 0.9).unwrap())
            .collect();
        let k = combine(&CombinatorInput::new(family).unwrap()).unwrap();
        for x in 0..=4 {
            assert_eq!(k.value(x), &IntervalSet::unit());
        }
    }

    #[test]
    fn contains_top_member() {
        let cache = GCache::new();
        for n in 1..=12 {
            let family = families::cp_uprays(n, 0.9, &cache).unwrap();
            let top = family[n].clone();
            let k = combine(&CombinatorInput::new(family).unwrap()).unwrap();
            for x in 0..=n {
                assert!(top.value(x).is_subset(k.value(x)), "n={n} x={x}");
            }
        }
    }
}
