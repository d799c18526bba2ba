//! Interval inference for a Bernoulli process and for the finite collection of
//! individuals it has generated.
//!
//! Three levels of data are modelled:
//!
//! * the *process*, characterised by a rate `p` (or a Normal law),
//! * the *representative sample*: the `N` individuals the process actually
//!   produced, summarised by `p̂_N` (or `X̄_N`),
//! * the *researcher's sample*: a simple random subset of size `n` of the
//!   representative sample.
//!
//! Confidence intervals ([`estimation`]) target the process parameter `p`.
//! Prediction intervals ([`prediction`]) target the realised statistic of the
//! representative sample and carry the finite population correction
//! `√((N − n)/N)`. The [`sim`] module checks the coverage of both families,
//! exactly for small `N` and by Monte Carlo otherwise.
//!
//! The numeric core is generic over the scalar type (see [`Scalar`] and
//! [`Real`]); the `*64` aliases below fix it to `f64`.

pub mod dist;
mod error;
pub mod estimation;
pub mod interval;
pub mod moments;
pub mod prediction;
mod scalar;
pub mod sim;

pub use error::{Error, Result};
pub use interval::{proportion_interval, Interval, IntervalKind, Method, Target};
pub use moments::{MomentPair, SampleSummary};
pub use prediction::{MeanSummary, Scale};
pub use scalar::{Real, Scalar};

/// Interval with `f64` endpoints.
pub type Interval64 = Interval<f64>;
/// Mean/variance pair in `f64`.
pub type MomentPair64 = MomentPair<f64>;
/// Continuous-measurement summary in `f64`.
pub type MeanSummary64 = MeanSummary<f64>;
/// Scale selector for the standardized statistic in `f64`.
pub type Scale64 = Scale<f64>;
