//! Finite-prefix realizations of the size-biased order.
//!
//! Three independent mechanisms produce the same law on arrangements of
//! `1..=n`:
//!
//! * [`sample_exponential`]: sort labels by independent exponential clocks with
//!   rates `w(i)`;
//! * [`sample_by_picks`]: iterated size-biased picks, each pick run as a pointer
//!   cycle over the source list;
//! * [`sample_by_insertion`]: size-biased insertion of `1, 2, ..., n` into a
//!   growing target list, which also yields the Lehmer code.
//!
//! [`sample_poisson_scatter`] realizes the clocks as lowest atoms of a Poisson
//! process in strips, and [`tsetlin`] holds the size-biased top-to-random chain.
//!
//! # Randomness
//!
//! All sampling uses [`SboRng`] (ChaCha8, a counter-based stream cipher RNG)
//! seeded from a `u64`. Replicate `r` of a run with seed `s` uses
//! [`replicate_seed`]`(s, r)`, so replicates can be generated in any order or
//! in parallel and still reproduce bit-for-bit.

mod exponential;
mod insertion;
mod picks;
mod scatter;
pub mod tsetlin;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lehmer::{FiniteOrder, LehmerCode};
use crate::sizes::SizeFunction;

pub use scatter::{PoissonScatterSample, ScatterPoint};
pub use tsetlin::{transition_matrix_tsetlin, tsetlin_step, TsetlinMatrix};

pub type SboRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SboRng {
    SboRng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `index` in a run seeded with `seed`.
pub fn replicate_seed(seed: u64, index: u64) -> u64 {
    seed ^ mix64(index)
}

/// Standard exponential variate by inversion of an open-interval uniform.
pub(crate) fn standard_exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    -u.ln()
}

/// Sizes of labels `1..=n`, prepared once for repeated sampling.
#[derive(Debug, Clone)]
pub struct SizeProfile {
    sizes: Vec<f64>,
    ln_sizes: Vec<f64>,
    representable: bool,
}

impl SizeProfile {
    pub fn new(desc: &SizeFunction, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be >= 1".into()));
        }
        let ln_sizes = desc.ln_values(n)?;
        let sizes = desc.raw_values(n)?;
        let representable = sizes.iter().all(|w| w.is_finite() && *w > 0.0);
        Ok(Self { sizes, ln_sizes, representable })
    }

    pub fn from_sizes(sizes: Vec<f64>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidArgument("n must be >= 1".into()));
        }
        if let Some(&bad) = sizes.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::NonPositiveSize(bad));
        }
        let ln_sizes = sizes.iter().map(|w| w.ln()).collect();
        Ok(Self { sizes, ln_sizes, representable: true })
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn ln_sizes(&self) -> &[f64] {
        &self.ln_sizes
    }

    /// Linear sizes; fails when some `w(i)` over- or underflows `f64`.
    pub fn sizes(&self) -> Result<&[f64]> {
        if self.representable {
            Ok(&self.sizes)
        } else {
            let k = self.sizes.iter().position(|w| !(w.is_finite() && *w > 0.0)).unwrap_or(0);
            Err(Error::Unrepresentable { index: k + 1 })
        }
    }

    /// `log X_i` for independent exponentials `X_i` with rates `w(i)`.
    pub fn log_clocks<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        exponential::log_clocks(&self.ln_sizes, rng)
    }

    pub fn exponential<R: Rng + ?Sized>(&self, rng: &mut R) -> FiniteOrder {
        exponential::sample(&self.ln_sizes, rng)
    }

    pub fn by_picks<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<FiniteOrder> {
        Ok(picks::sample(self.sizes()?, rng))
    }

    pub fn by_insertion<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(FiniteOrder, LehmerCode)> {
        Ok(insertion::sample(self.sizes()?, rng))
    }

    pub fn poisson_scatter<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PoissonScatterSample> {
        Ok(scatter::sample(self.sizes()?, rng))
    }
}

/// Labels `1..=n` sorted by independent exponential clocks of rates `w(i)`.
pub fn sample_exponential(desc: &SizeFunction, n: usize, seed: u64) -> Result<FiniteOrder> {
    Ok(SizeProfile::new(desc, n)?.exponential(&mut rng_from_seed(seed)))
}

/// Iterated size-biased picks from the source list `1..=n`.
pub fn sample_by_picks(desc: &SizeFunction, n: usize, seed: u64) -> Result<FiniteOrder> {
    SizeProfile::new(desc, n)?.by_picks(&mut rng_from_seed(seed))
}

/// Size-biased insertion of `1..=n`; returns the final list and the realized
/// relative ranks.
pub fn sample_by_insertion(desc: &SizeFunction, n: usize, seed: u64) -> Result<(FiniteOrder, LehmerCode)> {
    SizeProfile::new(desc, n)?.by_insertion(&mut rng_from_seed(seed))
}

/// Lowest Poisson atoms of the first `n` strips.
pub fn sample_poisson_scatter(desc: &SizeFunction, n: usize, seed: u64) -> Result<PoissonScatterSample> {
    SizeProfile::new(desc, n)?.poisson_scatter(&mut rng_from_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replicate_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..10_000).map(|r| replicate_seed(42, r)).collect();
        assert_eq!(seeds.len(), 10_000);
    }

    #[test]
    fn single_item() {
        let d = SizeFunction::constant(1.0).unwrap();
        assert_eq!(sample_exponential(&d, 1, 0).unwrap().arrangement(), &[1]);
        assert_eq!(sample_by_picks(&d, 1, 0).unwrap().arrangement(), &[1]);
        let (o, c) = sample_by_insertion(&d, 1, 0).unwrap();
        assert_eq!(o.arrangement(), &[1]);
        assert_eq!(c.ranks(), &[1]);
    }

    #[test]
    fn zero_length_rejected() {
        let d = SizeFunction::constant(1.0).unwrap();
        assert!(sample_exponential(&d, 0, 0).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let d = SizeFunction::geometric(0.8).unwrap();
        for seed in [0, 1, u64::MAX] {
            assert_eq!(sample_exponential(&d, 50, seed).unwrap(), sample_exponential(&d, 50, seed).unwrap());
            assert_eq!(sample_by_picks(&d, 50, seed).unwrap(), sample_by_picks(&d, 50, seed).unwrap());
            assert_eq!(sample_by_insertion(&d, 50, seed).unwrap(), sample_by_insertion(&d, 50, seed).unwrap());
            assert_eq!(
                sample_poisson_scatter(&d, 50, seed).unwrap(),
                sample_poisson_scatter(&d, 50, seed).unwrap()
            );
        }
    }

    #[test]
    fn exponential_handles_sizes_beyond_f64() {
        let d = SizeFunction::geometric(2.0).unwrap();
        let order = sample_exponential(&d, 3000, 9).unwrap();
        assert_eq!(order.len(), 3000);
        assert!(matches!(sample_by_picks(&d, 3000, 9), Err(Error::Unrepresentable { .. })));
    }
}
