//! Probability kernels for the binomial, Bernoulli-convolution
//! (Poisson-binomial) and hypergeometric laws.
//!
//! Binomial masses for `n <= 30` are evaluated directly from the product
//! formula with an exact integer coefficient; larger `n` goes through
//! Loader's saddle-point form, which stays accurate to a few ulps without
//! forming large factorial ratios.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{domain, Result};
use crate::sum::{compensated_sum, CompensatedSum};

/// Largest `n` for which binomial masses use the direct product formula.
const DIRECT_LIMIT: usize = 30;

/// Relative size below which tail terms are dropped.
const TAIL_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialParams {
    n: usize,
    p: f64,
}

impl BinomialParams {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        check_probability(p, "binomial success probability")?;
        Ok(Self { n, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Success probabilities of a Bernoulli chain of length at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct PVector(Vec<f64>);

impl PVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(domain("parameter vector must have at least one coordinate"));
        }
        for &pj in &p {
            check_probability(pj, "coordinate of parameter vector")?;
        }
        Ok(Self(p))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Average success probability `p̄`.
    pub fn mean(&self) -> f64 {
        (compensated_sum(self.0.iter().copied()) / self.0.len() as f64).clamp(0.0, 1.0)
    }

    /// Componentwise complement `1 - p`.
    pub fn complement(&self) -> Self {
        Self(self.0.iter().map(|&pj| 1.0 - pj).collect())
    }
}

/// Urn with `population` balls of which `successes` are red, sampled
/// without replacement `sample` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypergeomParams {
    population: usize,
    sample: usize,
    successes: usize,
}

impl HypergeomParams {
    pub fn new(population: usize, sample: usize, successes: usize) -> Result<Self> {
        if population == 0 {
            return Err(domain("hypergeometric population must be positive"));
        }
        if sample > population {
            return Err(domain(format!(
                "sample size {sample} exceeds population {population}"
            )));
        }
        if successes > population {
            return Err(domain(format!(
                "red-ball count {successes} exceeds population {population}"
            )));
        }
        Ok(Self {
            population,
            sample,
            successes,
        })
    }

    pub fn population(&self) -> usize {
        self.population
    }

    pub fn sample(&self) -> usize {
        self.sample
    }

    pub fn successes(&self) -> usize {
        self.successes
    }

    /// Red-ball proportion `K / N`.
    pub fn proportion(&self) -> f64 {
        self.successes as f64 / self.population as f64
    }
}

fn check_probability(p: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(domain(format!("{what} {p} is not in [0, 1]")))
    }
}

/// `P(X = x)` for `X ~ B(n, p)`.
pub fn binom_pmf(params: BinomialParams, x: usize) -> Result<f64> {
    if x > params.n {
        return Err(domain(format!("x = {x} outside 0..={}", params.n)));
    }
    Ok(pmf_raw(x, params.n, params.p))
}

/// Upper tail `P(X >= x)`; `x = n + 1` gives 0.
pub fn binom_tail(params: BinomialParams, x: usize) -> Result<f64> {
    if x > params.n + 1 {
        return Err(domain(format!("x = {x} outside 0..={}", params.n + 1)));
    }
    Ok(tail_raw(params.n, params.p, x))
}

/// Distribution function `P(X <= x)`.
pub fn binom_cdf(params: BinomialParams, x: usize) -> Result<f64> {
    if x > params.n {
        return Err(domain(format!("x = {x} outside 0..={}", params.n)));
    }
    Ok(split_tails(params.n, params.p, x + 1).0)
}

/// Whole mass function of `B(n, p)`, indexed `0..=n`.
pub fn binom_pmf_row(params: BinomialParams) -> Vec<f64> {
    let mut row = Vec::new();
    binom_row_into(params.n, params.p, &mut row);
    row
}

/// Mass function of the Bernoulli convolution `⊛ Ber(p_j)`.
pub fn pb_pmf(p: &PVector) -> Vec<f64> {
    let n = p.len();
    let mut dist = vec![0.0; n + 1];
    dist[0] = 1.0;
    for (j, &pj) in p.as_slice().iter().enumerate() {
        let qj = 1.0 - pj;
        for k in (1..=j + 1).rev() {
            dist[k] = dist[k] * qj + dist[k - 1] * pj;
        }
        dist[0] *= qj;
    }
    dist
}

/// Probability of the outcome set `xs` under the Bernoulli convolution.
pub fn pb_prob(p: &PVector, xs: &[usize]) -> Result<f64> {
    let n = p.len();
    if let Some(&bad) = xs.iter().find(|&&x| x > n) {
        return Err(domain(format!("outcome {bad} outside 0..={n}")));
    }
    let pmf = pb_pmf(p);
    let mut seen = vec![false; n + 1];
    let mut acc = CompensatedSum::default();
    for &x in xs {
        if !std::mem::replace(&mut seen[x], true) {
            acc.add(pmf[x]);
        }
    }
    Ok(acc.total())
}

/// `P(k red balls)`, zero outside the support.
pub fn hypergeom_pmf(params: HypergeomParams, k: usize) -> f64 {
    let HypergeomParams {
        population,
        sample,
        successes,
    } = params;
    if k > successes || k > sample || sample - k > population - successes {
        return 0.0;
    }
    if let (Some(a), Some(b), Some(c)) = (
        binomial_u128(successes, k),
        binomial_u128(population - successes, sample - k),
        binomial_u128(population, sample),
    ) {
        if let Some(num) = a.checked_mul(b) {
            return ratio_u128(num, c);
        }
    }
    // Loader-form ratio (R's dhyper); any common sampling fraction cancels.
    let p = sample as f64 / population as f64;
    let p1 = pmf_raw(k, successes, p);
    let p2 = pmf_raw(sample - k, population - successes, p);
    let p3 = pmf_raw(sample, population, p);
    p1 * p2 / p3
}

/// `β_n = B(n, 1/n)({0, 1})`, the level above which the optimal upray takes
/// its simple form.
pub fn beta_threshold(n: usize) -> Result<f64> {
    match n {
        0 => Err(domain("beta_threshold needs n >= 1")),
        1 => Ok(1.0),
        _ => {
            let nf = n as f64;
            let pow = ((nf - 1.0) * (-1.0 / nf).ln_1p()).exp();
            Ok(pow * (2.0 - 1.0 / nf))
        }
    }
}

/// Exact rational value of `β_n`.
pub fn beta_threshold_exact(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(domain("beta_threshold needs n >= 1"));
    }
    if n == 1 {
        return Ok(BigRational::one());
    }
    let nn = BigInt::from(n);
    let base = BigRational::new(BigInt::from(n - 1), nn.clone());
    let mut pow = BigRational::one();
    for _ in 0..n - 1 {
        pow *= &base;
    }
    Ok(pow * BigRational::new(BigInt::from(2 * n - 1), nn))
}

// ---------------------------------------------------------------------------
// raw kernels, no argument validation

pub(crate) fn pmf_raw(x: usize, n: usize, p: f64) -> f64 {
    if x > n {
        return 0.0;
    }
    let q = 1.0 - p;
    if p == 0.0 {
        return if x == 0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if x == n { 1.0 } else { 0.0 };
    }
    if n <= DIRECT_LIMIT {
        let c = binomial_u128(n, x).expect("small binomial coefficient") as f64;
        return c * p.powi(x as i32) * q.powi((n - x) as i32);
    }
    loader_pmf(x, n, p, q)
}

/// `(P(X < x), P(X >= x))`, the smaller side summed directly.
pub(crate) fn split_tails(n: usize, p: f64, x: usize) -> (f64, f64) {
    if x == 0 {
        return (0.0, 1.0);
    }
    if x > n {
        return (1.0, 0.0);
    }
    if p == 0.0 {
        return (1.0, 0.0);
    }
    if p == 1.0 {
        return (0.0, 1.0);
    }
    let q = 1.0 - p;
    let odds = p / q;
    if x as f64 > n as f64 * p {
        // upper side, terms decreasing from k = x
        let mut term = pmf_raw(x, n, p);
        let mut acc = CompensatedSum::default();
        acc.add(term);
        for k in x..n {
            term *= (n - k) as f64 / (k + 1) as f64 * odds;
            acc.add(term);
            if term <= TAIL_CUTOFF * acc.total() {
                break;
            }
        }
        let upper = acc.total().min(1.0);
        (1.0 - upper, upper)
    } else {
        // lower side, terms decreasing from k = x - 1 downwards
        let mut term = pmf_raw(x - 1, n, p);
        let mut acc = CompensatedSum::default();
        acc.add(term);
        for k in (1..x).rev() {
            term *= k as f64 / (n - k + 1) as f64 / odds;
            acc.add(term);
            if term <= TAIL_CUTOFF * acc.total() {
                break;
            }
        }
        let lower = acc.total().min(1.0);
        (lower, 1.0 - lower)
    }
}

#[inline]
pub(crate) fn tail_raw(n: usize, p: f64, x: usize) -> f64 {
    split_tails(n, p, x).1
}

/// Fills `row` with the mass function of `B(n, p)`, recursing outward from
/// the mode so that underflow only ever hits negligible terms.
pub(crate) fn binom_row_into(n: usize, p: f64, row: &mut Vec<f64>) {
    row.clear();
    row.resize(n + 1, 0.0);
    if p == 0.0 {
        row[0] = 1.0;
        return;
    }
    if p == 1.0 {
        row[n] = 1.0;
        return;
    }
    let q = 1.0 - p;
    let odds = p / q;
    let mode = (((n + 1) as f64 * p).floor() as usize).min(n);
    row[mode] = pmf_raw(mode, n, p);
    let mut term = row[mode];
    for k in mode..n {
        term *= (n - k) as f64 / (k + 1) as f64 * odds;
        row[k + 1] = term;
    }
    term = row[mode];
    for k in (1..=mode).rev() {
        term *= k as f64 / (n - k + 1) as f64 / odds;
        row[k - 1] = term;
    }
}

fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // c * (n - i) is divisible by (i + 1) at every step
        c = c.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(c)
}

fn ratio_u128(num: u128, den: u128) -> f64 {
    const EXACT: u128 = 1 << 53;
    if num < EXACT && den < EXACT {
        num as f64 / den as f64
    } else {
        // Both integers round on conversion; split off the quotient to keep
        // one rounding per part.
        let q = num / den;
        let r = num % den;
        q as f64 + r as f64 / den as f64
    }
}

/// Stirling series remainder `ln Γ(n+1) - (n + 1/2) ln n + n - ln √(2π)` at
/// integer `n`.
fn stirlerr(n: usize) -> f64 {
    #[allow(clippy::excessive_precision)]
    const TABLE: [f64; 16] = [
        0.0,
        0.081_061_466_795_327_258_219_67,
        0.041_340_695_955_409_294_093_82,
        0.027_677_925_684_998_339_148_79,
        0.020_790_672_103_765_093_111_52,
        0.016_644_691_189_821_192_163_19,
        0.013_876_128_823_070_747_998_75,
        0.011_896_709_945_891_770_095_06,
        0.010_411_265_261_972_096_497_48,
        0.009_255_462_182_712_732_917_729,
        0.008_330_563_433_362_871_256_469,
        0.007_573_675_487_951_840_794_972,
        0.006_942_840_107_209_529_865_664,
        0.006_408_994_188_004_207_068_44,
        0.005_951_370_112_758_847_735_624,
        0.005_554_733_551_962_801_371_039,
    ];
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15 {
        return TABLE[n];
    }
    let nf = n as f64;
    let nn = nf * nf;
    if n > 500 {
        (S0 - S1 / nn) / nf
    } else if n > 80 {
        (S0 - (S1 - S2 / nn) / nn) / nf
    } else if n > 35 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / nf
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / nf
    }
}

/// Deviance term `x ln(x / np) + np - x`, by series when `x ≈ np`.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

fn loader_pmf(x: usize, n: usize, p: f64, q: f64) -> f64 {
    let nf = n as f64;
    if x == 0 {
        let lc = if p < 0.1 {
            -bd0(nf, nf * q) - nf * p
        } else {
            nf * q.ln()
        };
        return lc.exp();
    }
    if x == n {
        let lc = if q < 0.1 {
            -bd0(nf, nf * p) - nf * q
        } else {
            nf * p.ln()
        };
        return lc.exp();
    }
    let xf = x as f64;
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(xf, nf * p) - bd0(nf - xf, nf * q);
    let lf = (2.0 * PI).ln() + xf.ln() + (-xf / nf).ln_1p();
    (lc - 0.5 * lf).exp()
}
