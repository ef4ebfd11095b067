//! Tail bounds for semi-exponential summands, E X² e^{|X|ᵖ} ≤ K_n/n termwise.

use super::result::{BoundFamily, BoundResult};
use super::{check_alpha, check_x_nonneg};
use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Shape of the semi-exponential bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiExpForm {
    /// Sub-Gaussian regime below the crossover αx = K_n^{1/(2−p)}, pure
    /// semi-exponential decay above it.
    Piecewise,
    /// Single expression interpolating the two regimes.
    Smoothed,
}

/// Tail bound for sums whose terms satisfy Σ E X_i² e^{|X_i|ᵖ} ≤ K_n:
///
///   Piecewise:  2(1 − α)⁻¹ exp{ −α²x² / (2K_n) }     for αx ≤ K_n^{1/(2−p)},
///               2(1 − α)⁻¹ exp{ −(αx)ᵖ / 2 }          for αx ≥ K_n^{1/(2−p)};
///   Smoothed:   2(1 − α)⁻¹ exp{ −α²x² / (2(K_n + α^{2−p} x^{2−p})) }.
///
/// The two piecewise branches agree at the crossover; at exact equality both
/// are evaluated and the smaller is returned, so the curve stays continuous
/// under floating-point rounding of the breakpoint. Requires p ∈ (0, 1) and
/// K_n ≥ 1 (the normalization the sub-Gaussian branch is derived under).
pub fn semi_exponential_tail_bound<R: Real>(
    x: R,
    alpha: R,
    p: R,
    k_n: R,
    form: SemiExpForm,
) -> Result<BoundResult<R>> {
    check_x_nonneg(x)?;
    check_alpha(alpha)?;
    if !(p > R::zero() && p < R::one()) {
        return Err(Error::Domain(format!(
            "semi-exponential exponent needs p in (0, 1), got {p}"
        )));
    }
    if !(k_n >= R::one()) || !k_n.is_finite() {
        return Err(Error::Domain(format!(
            "semi-exponential bound needs K_n >= 1, got {k_n}"
        )));
    }
    let two = lit::<R>(2.0);
    let lead = two * (R::one() - alpha).recip();
    let ax = alpha * x;
    let raw = match form {
        SemiExpForm::Piecewise => {
            let cross = k_n.powf((two - p).recip());
            let sub_gaussian = || lead * (-(ax * ax) / (two * k_n)).exp();
            let semi_exp = || lead * (-ax.powf(p) / two).exp();
            if ax < cross {
                sub_gaussian()
            } else if ax > cross {
                semi_exp()
            } else {
                sub_gaussian().min(semi_exp())
            }
        }
        SemiExpForm::Smoothed => {
            let denom = two * (k_n + alpha.powf(two - p) * x.powf(two - p));
            lead * (-(ax * ax) / denom).exp()
        }
    };
    Ok(BoundResult::new(BoundFamily::SemiExp, raw)
        .input("x", x)
        .input("p", p)
        .input("k_n", k_n)
        .param("alpha", alpha))
}
