//! Tail bounds for sums (and running maxima) of negatively associated
//! random variables.
//!
//! Every bound here has the shape (1 − α)⁻¹ · F(α, x, …): a deviation
//! functional F evaluated at a rescaled threshold, paid for by the (1 − α)⁻¹
//! factor that converts an independent-copy estimate into one for the NA sum.
//! Callers pick α ∈ (0, 1) or delegate to
//! [`crate::transforms::minimize_over_alpha`].

mod bernstein;
mod exp_moment;
mod fuk_nagaev;
mod gaussian_family;
mod result;
mod rio;
mod semi_exp;

pub use bernstein::{bernstein_condition_tail_bound, BernsteinForm};
pub use exp_moment::{
    exp_moment_constants, exp_moment_mgf_bound, exp_moment_tail_bound, ExpMomentConstants,
};
pub use fuk_nagaev::{
    fuk_nagaev_tail_bound, fuk_tail_bound, weak_moment_tail_bound, FukNagaevVariant,
};
pub use gaussian_family::{bennett_b, bernstein_b1, fuk_nagaev_h, GaussianFamilyArgs};
pub use result::{BoundFamily, BoundResult};
pub use rio::{
    rio_ell, rio_ell_star, rio_mgf_bound, rio_tail_bound, BoundedRangeSpec, RioForm,
};
pub use semi_exp::{semi_exponential_tail_bound, SemiExpForm};

use crate::error::{Error, Result};
use crate::real::Real;

/// Shared validation for the NA-to-independent tuning parameter.
pub(crate) fn check_alpha<R: Real>(alpha: R) -> Result<()> {
    if alpha > R::zero() && alpha < R::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "alpha must lie strictly inside (0, 1), got {alpha}"
        )))
    }
}

/// Shared validation for deviation thresholds.
pub(crate) fn check_x_nonneg<R: Real>(x: R) -> Result<()> {
    if x >= R::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("x must be finite and >= 0, got {x}")))
    }
}
