//! Exact confidence regions for the average success probability of a
//! possibly inhomogeneous Bernoulli chain.
//!
//! Given `x` successes in `n` independent trials with success probabilities
//! `p_1, ..., p_n`, the regions built here cover the mean `p̄ = Σ p_j / n`
//! with probability at least `β` for *every* parameter vector, not only for
//! homogeneous ones. The crate is organized bottom-up:
//!
//! - [`distributions`]: binomial, Poisson-binomial and hypergeometric kernels.
//! - [`inverse`]: inversion of the binomial tail in `p` and the
//!   Clopper-Pearson rays built from it.
//! - [`interval_set`] and [`region`]: finite unions of half-open intervals
//!   and `x`-indexed confidence regions.
//! - [`intervals`]: the combinator over binomial regions, the optimal
//!   isotone uprays and downrays, two-sided regions and comparison regions.
//! - [`coverage`]: exact coverage evaluation and minimal-coverage search over
//!   three-point parameter configurations.
//! - [`document`]: the JSON region document used by the CLI.

pub mod coverage;
pub mod distributions;
pub mod document;
mod error;
pub mod interval_set;
pub mod intervals;
pub mod inverse;
pub mod region;
mod sum;

pub use error::{Error, Result};
pub use interval_set::{Bound, Interval, IntervalSet};
pub use region::{ConfidenceRegion, RegionKind};
