//! Marginal laws and the moment functionals that turn them into bound inputs.

mod dist;
mod quadrature;
mod summary;

pub use dist::{rademacher, DistKind, DistributionSpec};
pub use summary::{
    bernstein_condition_check, moment_summary, smallest_bernstein_scale, BernsteinCheck,
    MomentSummary,
};
