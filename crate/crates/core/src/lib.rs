//! Deviation bounds for sums of negatively associated (NA) random variables,
//! with the Monte Carlo tooling to sanity-check every bound against exact
//! samplers.
//!
//! The crate is organized as a pipeline:
//!
//! * [`moments`] describes marginal laws and computes every moment functional
//!   the bounds consume (second moments, truncated second moments, weak
//!   norms, semi-exponential and exponential moments, Bernstein scales).
//! * [`bounds`] evaluates the closed-form tail bounds. Each has the shape
//!   (1 − α)⁻¹ · F(α, x, …) with a free parameter α ∈ (0, 1).
//! * [`transforms`] supplies the scalar machinery: Legendre–Young conjugates,
//!   α minimization, and truncation-level selection.
//! * [`sampler`] draws exact NA vectors (sampling without replacement,
//!   multinomial counts, Gaussian with nonpositive covariances) plus paired
//!   independent shadows sharing the same random streams.
//! * [`montecarlo`] estimates tail probabilities and runs the comparison,
//!   domination, and supermartingale checks.
//! * [`config`] and [`report`] turn TOML run descriptions into CSV/text
//!   reports; the `nadev` binary is a thin wrapper over them.
//!
//! The bound and transform layers are generic over the scalar type through
//! [`real::Real`] (f32 or f64); the simulation and reporting layers are
//! f64-only. The aliases below pin the common f64 instantiations.

pub mod bounds;
pub mod config;
pub mod error;
pub mod moments;
pub mod montecarlo;
pub mod real;
pub mod report;
mod rng;
pub mod sampler;
pub mod transforms;

pub use bounds::{BoundFamily, BoundResult};
pub use error::{Error, Result};
pub use real::Real;

/// f64 instantiations of the generic types, for callers that do not care
/// about scalar genericity.
pub type BoundResult64 = bounds::BoundResult<f64>;
pub type BoundedRangeSpec64 = bounds::BoundedRangeSpec<f64>;
pub type ExpMomentConstants64 = bounds::ExpMomentConstants<f64>;
pub type GaussianFamilyArgs64 = bounds::GaussianFamilyArgs<f64>;
pub type OptimizationResult64 = transforms::OptimizationResult<f64>;
pub type Interval64 = transforms::Interval<f64>;
