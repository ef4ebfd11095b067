//! Truncation-based tail bounds: the two-parameter Fuk–Nagaev composites and
//! the p-th moment variant.

use super::gaussian_family::{bennett_b, bernstein_b1, fuk_nagaev_h, GaussianFamilyArgs};
use super::result::{BoundFamily, BoundResult};
use super::{check_alpha, check_x_nonneg};
use crate::error::{Error, Result};
use crate::real::{lit, lit_u64, Real};

/// Which deviation functional the truncated part is fed through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FukNagaevVariant {
    Hn,
    Bennett,
    Bernstein,
}

impl FukNagaevVariant {
    fn evaluate<R: Real>(self, x: R, v: R, n: u64, alpha: R) -> Result<R> {
        match self {
            FukNagaevVariant::Hn => {
                Ok(fuk_nagaev_h(&GaussianFamilyArgs::new(x, v, n, alpha)?))
            }
            FukNagaevVariant::Bennett => bennett_b(x, v, alpha),
            FukNagaevVariant::Bernstein => bernstein_b1(x, v, alpha),
        }
    }

    fn family(self) -> BoundFamily {
        match self {
            FukNagaevVariant::Hn => BoundFamily::FukNagaevH,
            FukNagaevVariant::Bennett => BoundFamily::Bennett,
            FukNagaevVariant::Bernstein => BoundFamily::Bernstein1,
        }
    }
}

fn check_y<R: Real>(y: R) -> Result<()> {
    if y > R::zero() && y.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "truncation level y must be finite and > 0, got {y}"
        )))
    }
}

/// Two-parameter tail bound
///
///   P(max_k S_k ≥ x) ≤ (1 − α)⁻¹ · F(αx/y, √B_n(y)/y) + tail_term,
///
/// where B_n(y) = Σ E X_i² 1{X_i ≤ y} and `tail_term` = Σ P(X_i > y) is the
/// caller-supplied truncation remainder (not rescaled by (1 − α)⁻¹).
///
/// `b_n_y` = 0 collapses the main term; the result is then the remainder
/// alone with the `degenerate` flag set.
pub fn fuk_nagaev_tail_bound<R: Real>(
    x: R,
    y: R,
    alpha: R,
    n: u64,
    b_n_y: R,
    tail_term: R,
    variant: FukNagaevVariant,
) -> Result<BoundResult<R>> {
    check_x_nonneg(x)?;
    check_y(y)?;
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    if !(b_n_y >= R::zero()) || !b_n_y.is_finite() {
        return Err(Error::Domain(format!(
            "truncated second moment must be finite and >= 0, got {b_n_y}"
        )));
    }
    if !(tail_term >= R::zero()) || !tail_term.is_finite() {
        return Err(Error::Domain(format!(
            "tail term must be finite and >= 0, got {tail_term}"
        )));
    }

    let family = if variant == FukNagaevVariant::Hn {
        BoundFamily::FukNagaevTail
    } else {
        variant.family()
    };
    let base = |raw: R| {
        BoundResult::new(family, raw)
            .input("x", x)
            .input("n", lit_u64(n))
            .input("b_n_y", b_n_y)
            .input("tail_term", tail_term)
            .param("alpha", alpha)
            .param("y", y)
    };
    if b_n_y == R::zero() {
        return Ok(base(tail_term).mark_degenerate());
    }
    let main = variant.evaluate(alpha * x / y, b_n_y.sqrt() / y, n, alpha)?;
    Ok(base((R::one() - alpha).recip() * main + tail_term))
}

/// Weak-moment tail bound
///
///   P(max_k S_k ≥ x) ≤ (1 − α)⁻¹ · H_n^α(αx/y, √B_n/y) + A_p / yᵖ,
///
/// for laws with weak p-th norms summing to A_p, p ≥ 2.
pub fn weak_moment_tail_bound<R: Real>(
    x: R,
    y: R,
    alpha: R,
    n: u64,
    b_n: R,
    a_p: R,
    p: R,
) -> Result<BoundResult<R>> {
    check_x_nonneg(x)?;
    check_y(y)?;
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    if !(p >= lit(2.0)) || !p.is_finite() {
        return Err(Error::Domain(format!("weak-moment bound needs p >= 2, got {p}")));
    }
    if !(b_n > R::zero()) || !b_n.is_finite() {
        return Err(Error::Domain(format!(
            "second-moment sum must be finite and > 0, got {b_n}"
        )));
    }
    if !(a_p >= R::zero()) || !a_p.is_finite() {
        return Err(Error::Domain(format!(
            "weak-norm sum must be finite and >= 0, got {a_p}"
        )));
    }
    let main = fuk_nagaev_h(&GaussianFamilyArgs::new(
        alpha * x / y,
        b_n.sqrt() / y,
        n,
        alpha,
    )?);
    let raw = (R::one() - alpha).recip() * main + a_p / y.powf(p);
    Ok(BoundResult::new(BoundFamily::WeakMoment, raw)
        .input("x", x)
        .input("n", lit_u64(n))
        .input("b_n", b_n)
        .input("a_p", a_p)
        .input("p", p)
        .param("alpha", alpha)
        .param("y", y))
}

/// One-shot p-th moment tail bound (no explicit truncation level)
///
///   P(max_k S_k ≥ x) ≤ (1 − α)⁻¹ [ (1 + 2/p)ᵖ V_n / (αx)ᵖ
///                                   + exp{ −2αx² / ((p+2)² eᵖ B_n) } ],
///
/// with V_n = Σ E|X_i|ᵖ and B_n = Σ E X_i².
pub fn fuk_tail_bound<R: Real>(x: R, alpha: R, p: R, b_n: R, v_n: R) -> Result<BoundResult<R>> {
    check_alpha(alpha)?;
    if !(x > R::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "this bound needs x > 0 (the moment term divides by x), got {x}"
        )));
    }
    if !(p >= lit(2.0)) || !p.is_finite() {
        return Err(Error::Domain(format!("p must be >= 2, got {p}")));
    }
    if !(b_n > R::zero()) || !b_n.is_finite() {
        return Err(Error::Domain(format!(
            "second-moment sum must be finite and > 0, got {b_n}"
        )));
    }
    if !(v_n >= R::zero()) || !v_n.is_finite() {
        return Err(Error::Domain(format!(
            "p-th moment sum must be finite and >= 0, got {v_n}"
        )));
    }
    let two = lit::<R>(2.0);
    let moment = (R::one() + two / p).powf(p) * v_n / (alpha * x).powf(p);
    let exp_term = (-alpha * two * x * x / ((p + two).powi(2) * p.exp() * b_n)).exp();
    let raw = (R::one() - alpha).recip() * (moment + exp_term);
    Ok(BoundResult::new(BoundFamily::FukPth, raw)
        .input("x", x)
        .input("p", p)
        .input("b_n", b_n)
        .input("v_n", v_n)
        .param("alpha", alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn composite_matches_reference_value() {
        let r = fuk_nagaev_tail_bound(5.0, 1.0, 0.5, 100, 4.0, 0.01, FukNagaevVariant::Bernstein)
            .unwrap();
        assert!(rel(r.raw_value, 1.457_548_329_974_403_3) <= 1e-14);
        assert_eq!(r.clipped_value, 1.0);
        assert!(!r.degenerate);
        assert_eq!(r.param_value("y"), Some(1.0));
    }

    #[test]
    fn variants_keep_their_ordering() {
        let h = fuk_nagaev_tail_bound(5.0, 1.0, 0.5, 100, 4.0, 0.01, FukNagaevVariant::Hn)
            .unwrap()
            .raw_value;
        let b = fuk_nagaev_tail_bound(5.0, 1.0, 0.5, 100, 4.0, 0.01, FukNagaevVariant::Bennett)
            .unwrap()
            .raw_value;
        let b1 = fuk_nagaev_tail_bound(5.0, 1.0, 0.5, 100, 4.0, 0.01, FukNagaevVariant::Bernstein)
            .unwrap()
            .raw_value;
        assert!(rel(h, 1.447_215_420_158_655_3) <= 1e-14);
        assert!(rel(b, 1.450_869_541_010_999_7) <= 1e-14);
        assert!(h <= b && b <= b1);
    }

    #[test]
    fn zero_truncated_moment_degenerates_to_the_remainder() {
        let r = fuk_nagaev_tail_bound(5.0, 1.0, 0.5, 100, 0.0, 0.007, FukNagaevVariant::Hn)
            .unwrap();
        assert!(r.degenerate);
        assert_eq!(r.raw_value, 0.007);
    }

    #[test]
    fn indicator_zeroes_the_main_term_for_huge_thresholds() {
        let r =
            fuk_nagaev_tail_bound(1e6, 1.0, 0.5, 100, 4.0, 0.0, FukNagaevVariant::Hn).unwrap();
        assert_eq!(r.raw_value, 0.0);
    }

    #[test]
    fn weak_moment_matches_reference_value() {
        let y = 723.824_136_505_419_71;
        let r = weak_moment_tail_bound(10.0, y, 0.5, 1000, 1000.0, 1000.0, 3.0).unwrap();
        assert!(rel(r.raw_value, 1.993_430_250_940_098_5) <= 1e-13);
        assert_eq!(r.clipped_value, 1.0);
    }

    #[test]
    fn weak_moment_with_zero_weak_norm_reduces_to_the_h_term() {
        let wm = weak_moment_tail_bound(8.0, 2.0, 0.3, 50, 25.0, 0.0, 2.0).unwrap();
        let fk = fuk_nagaev_tail_bound(8.0, 2.0, 0.3, 50, 25.0, 0.0, FukNagaevVariant::Hn).unwrap();
        assert_eq!(wm.raw_value, fk.raw_value);
    }

    #[test]
    fn weak_moment_rejects_p_below_two() {
        assert!(weak_moment_tail_bound(8.0, 2.0, 0.3, 50, 25.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn pth_moment_bound_matches_reference_value() {
        let r = fuk_tail_bound(10.0, 0.5, 2.0, 100.0, 100.0).unwrap();
        assert!(rel(r.raw_value, 33.983_154_433_764_306) <= 1e-14);
        assert_eq!(r.clipped_value, 1.0);
    }

    #[test]
    fn pth_moment_bound_at_half_matches_expanded_display() {
        for i in 1..=20 {
            let x = 3.0 * i as f64;
            let (p, bn, vn) = (2.5, 80.0, 120.0);
            let r = fuk_tail_bound(x, 0.5, p, bn, vn).unwrap();
            let display = 2.0
                * ((1.0 + 2.0 / p).powf(p) * vn * 2.0f64.powf(p) / x.powf(p)
                    + (-x * x / ((p + 2.0).powi(2) * p.exp() * bn)).exp());
            assert!(rel(r.raw_value, display) <= 1e-12);
        }
    }
}
