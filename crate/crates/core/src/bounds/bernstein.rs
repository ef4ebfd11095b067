//! Tail bounds under the Bernstein moment condition
//! |Σ E X_iᵏ| ≤ ½ k! M^{k−2} B_n for k ≥ 2.

use super::result::{BoundFamily, BoundResult};
use super::{check_alpha, check_x_nonneg};
use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Which printed form of the Bernstein-condition bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BernsteinForm {
    /// exp{ −αx² / (B_n(1 + √(2xM/B_n)) + xM) }; smaller denominator growth
    /// for moderate x, always at least as tight as `Simple`.
    Sharp,
    /// exp{ −αx² / (2(B_n + xM)) }, the textbook display.
    Simple,
}

/// Bernstein-condition tail bound
///
///   Sharp:  (1 − α)⁻¹ exp{ −αx² / (B_n(1 + √(2xM/B_n)) + xM) },
///   Simple: (1 − α)⁻¹ exp{ −αx² / (2(B_n + xM)) }.
///
/// Sharp ≤ Simple pointwise: by the AM–GM step B_n√(2xM/B_n) ≤ B_n + xM/2,
/// the sharp denominator never exceeds the simple one.
pub fn bernstein_condition_tail_bound<R: Real>(
    x: R,
    alpha: R,
    m: R,
    b_n: R,
    form: BernsteinForm,
) -> Result<BoundResult<R>> {
    check_x_nonneg(x)?;
    check_alpha(alpha)?;
    if !(m > R::zero()) || !m.is_finite() {
        return Err(Error::Domain(format!(
            "Bernstein scale M must be finite and > 0, got {m}"
        )));
    }
    if !(b_n > R::zero()) || !b_n.is_finite() {
        return Err(Error::Domain(format!(
            "variance proxy B_n must be finite and > 0, got {b_n}"
        )));
    }
    let two = lit::<R>(2.0);
    let denom = match form {
        BernsteinForm::Sharp => b_n * (R::one() + (two * x * m / b_n).sqrt()) + x * m,
        BernsteinForm::Simple => two * (b_n + x * m),
    };
    let raw = (R::one() - alpha).recip() * (-alpha * x * x / denom).exp();
    Ok(BoundResult::new(BoundFamily::BernsteinCond, raw)
        .input("x", x)
        .input("m", m)
        .input("b_n", b_n)
        .param("alpha", alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn reference_values_at_the_worked_point() {
        let sharp = bernstein_condition_tail_bound(10.0, 0.5, 1.0, 100.0, BernsteinForm::Sharp)
            .unwrap();
        let simple = bernstein_condition_tail_bound(10.0, 0.5, 1.0, 100.0, BernsteinForm::Simple)
            .unwrap();
        assert!(rel(sharp.raw_value, 1.447_713_759_000_283_3) <= 1e-14);
        assert!(rel(simple.raw_value, 1.593_406_939_786_923_2) <= 1e-14);
    }

    #[test]
    fn sharp_never_exceeds_simple() {
        let mut state = 0x243F_6A88_85A3_08D3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let x = 50.0 * next();
            let alpha = (next() * 0.98 + 0.01).clamp(0.01, 0.99);
            let m = 0.1 + 5.0 * next();
            let b_n = 1.0 + 200.0 * next();
            let sharp = bernstein_condition_tail_bound(x, alpha, m, b_n, BernsteinForm::Sharp)
                .unwrap()
                .raw_value;
            let simple = bernstein_condition_tail_bound(x, alpha, m, b_n, BernsteinForm::Simple)
                .unwrap()
                .raw_value;
            assert!(
                sharp <= simple * (1.0 + 1e-12),
                "sharp {sharp} > simple {simple} at x={x} alpha={alpha} m={m} b_n={b_n}"
            );
        }
    }

    #[test]
    fn zero_threshold_gives_the_bare_prefactor() {
        let r = bernstein_condition_tail_bound(0.0, 0.25, 1.0, 10.0, BernsteinForm::Sharp).unwrap();
        assert!(rel(r.raw_value, 1.0 / 0.75) <= 1e-15);
        assert_eq!(r.clipped_value, 1.0);
    }

    #[test]
    fn scale_and_variance_must_be_positive() {
        assert!(bernstein_condition_tail_bound(1.0, 0.5, 0.0, 10.0, BernsteinForm::Sharp).is_err());
        assert!(bernstein_condition_tail_bound(1.0, 0.5, 1.0, 0.0, BernsteinForm::Simple).is_err());
    }
}
