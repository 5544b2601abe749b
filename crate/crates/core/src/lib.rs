//! Size-biased orders of the positive integers.
//!
//! Item `i` carries a size `w(i) > 0` and an independent exponential clock
//! of rate `w(i)`; sorting the clocks gives a random total order in which
//! larger items tend to come first. This crate provides
//!
//! * [`sizes`]: size-function descriptors and their analytic metadata,
//! * [`probkernel`]: exact finite-dimensional probabilities,
//! * [`samplers`]: equivalent samplers and the Tsetlin library chain,
//! * [`classifier`]: the order type of the infinite order,
//! * [`stats`]: records, inversions and the Steele statistic,
//! * [`verify`]: a randomized check of the exact identities.

pub mod classifier;
pub mod error;
pub mod lehmer;
pub mod numeric;
pub mod probkernel;
pub mod samplers;
pub mod sizes;
pub mod stats;
pub mod verify;

pub use classifier::{classify, classify_descriptor, ClassificationReport, FiredCase, OrderType};
pub use error::{Error, Result};
pub use lehmer::{FiniteOrder, LehmerCode};
pub use samplers::{SboRng, SizeProfile};
pub use sizes::{AccumulationSet, Extended, SizeFamily, SizeFunction, SizeMetadata, Tristate};
pub use verify::{run_identity_suite, IdentityCheck, REQUIRED_IDENTITIES};
