use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::distributions::{hypergeom_pmf, pb_prob, HypergeomParams, PVector};
use crate::error::{domain, Result};
use crate::inverse::{check_level, cp_upray, g_inverse};
use crate::region::ConfidenceRegion;
use crate::sum::CompensatedSum;

/// `H_{n,p,N}(K ∋ p)` with `p = K/N`, for sampling without replacement.
pub fn hypergeom_coverage(region: &ConfidenceRegion, params: HypergeomParams) -> Result<f64> {
    if region.n() != params.sample() {
        return Err(domain(format!(
            "region has n = {}, sample size is {}",
            region.n(),
            params.sample()
        )));
    }
    let p = params.proportion();
    Ok((0..=region.n())
        .filter(|&k| region.value(k).contains(p))
        .map(|k| hypergeom_pmf(params, k))
        .collect::<CompensatedSum>()
        .total())
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut c = BigInt::one();
    for i in 0..k.min(n - k) {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

fn binom_tail_exact(n: usize, p: &BigRational, x: usize) -> BigRational {
    let q = BigRational::one() - p;
    (x..=n)
        .map(|j| {
            BigRational::from_integer(binomial(n, j))
                * num_traits::pow(p.clone(), j)
                * num_traits::pow(q.clone(), n - j)
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Exact hypergeometric coverage of the Clopper-Pearson upray at a rational
/// level. Membership `p ∈ ]g_n(k), 1]` is decided as `P_p(X >= k) > 1 - β`,
/// which is equivalent because the tail is strictly increasing in `p`.
pub fn cp_hypergeom_coverage_exact(
    params: HypergeomParams,
    beta: &BigRational,
) -> Result<BigRational> {
    if *beta <= BigRational::zero() || *beta >= BigRational::one() {
        return Err(domain(format!("level {beta} is not in ]0, 1[")));
    }
    let (big_n, n, big_k) = (params.population(), params.sample(), params.successes());
    let p = BigRational::new(BigInt::from(big_k), BigInt::from(big_n));
    let alpha = BigRational::one() - beta;
    let total = binomial(big_n, n);
    let mut cov = BigRational::zero();
    for k in 0..=n {
        if k == 0 || binom_tail_exact(n, &p, k) > alpha {
            cov += BigRational::new(
                binomial(big_k, k) * binomial(big_n - big_k, n - k),
                total.clone(),
            );
        }
    }
    Ok(cov)
}

/// The one-sided test `ψ = 1{x >= 1}` of `p̄ <= r`, `r = g_2(1)`, evaluated
/// at `p = (r - ε, r + ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Remark8Outcome {
    pub r: f64,
    /// Nominal size `1 - β`.
    pub level_bound: f64,
    /// `BC_p(ψ = 1)`, equal to `1 - β + ε²`.
    pub attained: f64,
    /// Outcomes at which the Clopper-Pearson upray excludes `r`.
    pub rejection: Vec<usize>,
}

pub fn remark8_counterexample(beta: f64, epsilon: f64) -> Result<Remark8Outcome> {
    check_level(beta)?;
    let r = g_inverse(2, 1, beta)?;
    if !(0.0..=r.min(1.0 - r)).contains(&epsilon) {
        return Err(domain(format!(
            "ε = {epsilon} is not in [0, {}]",
            r.min(1.0 - r)
        )));
    }
    let upray = cp_upray(2, beta)?;
    let rejection: Vec<usize> = (0..=2).filter(|&x| !upray.value(x).contains(r)).collect();
    let p = PVector::new(vec![r - epsilon, r + epsilon])?;
    Ok(Remark8Outcome {
        r,
        level_bound: 1.0 - beta,
        attained: pb_prob(&p, &rejection)?,
        rejection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse::cp_upray;

    #[test]
    fn hypergeometric_instance() {
        let h = HypergeomParams::new(10, 3, 1).unwrap();
        let beta = BigRational::new(729.into(), 1000.into());
        let exact = cp_hypergeom_coverage_exact(h, &beta).unwrap();
        assert_eq!(exact, BigRational::new(7.into(), 10.into()));
        assert!(exact < beta);

        let k = cp_upray(3, 0.729).unwrap();
        let c = hypergeom_coverage(&k, HypergeomParams::new(10, 3, 0).unwrap()).unwrap();
        assert_eq!(c, 1.0);
        assert!(hypergeom_coverage(&k, HypergeomParams::new(10, 4, 1).unwrap()).is_err());
    }

    #[test]
    fn exhaustive_sample_is_deterministic() {
        for big_k in 0..=6 {
            let k = cp_upray(6, 0.9).unwrap();
            let c = hypergeom_coverage(&k, HypergeomParams::new(6, 6, big_k).unwrap()).unwrap();
            assert!(c == 0.0 || c == 1.0);
        }
    }

    #[test]
    fn exact_agrees_with_float_away_from_boundaries() {
        let beta = BigRational::new(9.into(), 10.into());
        for big_k in 0..=20 {
            let h = HypergeomParams::new(20, 5, big_k).unwrap();
            let exact = cp_hypergeom_coverage_exact(h, &beta).unwrap();
            let float = hypergeom_coverage(&cp_upray(5, 0.9).unwrap(), h).unwrap();
            let e: f64 = num_traits::ToPrimitive::to_f64(&exact).unwrap();
            assert!((e - float).abs() < 1e-14, "K={big_k}");
        }
    }

    #[test]
    fn remark8_values() {
        let o = remark8_counterexample(0.9, 0.01).unwrap();
        assert_eq!(o.rejection, vec![1, 2]);
        assert!((o.attained - 0.1001).abs() < 1e-14);
        assert!(o.attained > o.level_bound);
        let o = remark8_counterexample(0.75, 0.05).unwrap();
        assert!((o.attained - 0.2525).abs() < 1e-14);
        let o = remark8_counterexample(0.9, 0.0).unwrap();
        assert!((o.attained - 0.1).abs() < 1e-15);
        assert!(remark8_counterexample(0.9, 0.5).is_err());
    }
}
