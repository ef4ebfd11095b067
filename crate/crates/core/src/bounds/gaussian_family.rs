//! The Fuk–Nagaev deviation functional and its two classical relaxations.

use super::{check_alpha, check_x_nonneg};
use crate::error::{Error, Result};
use crate::real::{lit, lit_u64, Real};

/// Validated arguments for [`fuk_nagaev_h`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFamilyArgs<R: Real> {
    pub x: R,
    pub v: R,
    pub n: u64,
    pub alpha: R,
}

impl<R: Real> GaussianFamilyArgs<R> {
    pub fn new(x: R, v: R, n: u64, alpha: R) -> Result<Self> {
        check_x_nonneg(x)?;
        check_alpha(alpha)?;
        if !(v > R::zero()) || !v.is_finite() {
            return Err(Error::Domain(format!("v must be finite and > 0, got {v}")));
        }
        if n == 0 {
            return Err(Error::Domain("n must be >= 1".into()));
        }
        Ok(GaussianFamilyArgs { x, v, n, alpha })
    }
}

/// H_n(x, v)^α, the sharpest member of the family:
///
///   { (v²/(x+v²))^{x+v²} · (n/(n−x))^{n−x} }^{αn/(n+v²)}  for x < n,
///   (v²/(n+v²))^{αn}                                      at x = n,
///   0                                                     for x > n.
///
/// The x = n case is the (n/(n−x))^{n−x} → (+∞)⁰ = 1 limit written out, and
/// the cutoff above n reflects the indicator in the underlying estimate.
pub fn fuk_nagaev_h<R: Real>(args: &GaussianFamilyArgs<R>) -> R {
    let GaussianFamilyArgs { x, v, n, alpha } = *args;
    let n_r = lit_u64::<R>(n);
    if x > n_r {
        return R::zero();
    }
    let v2 = v * v;
    if x == n_r {
        return (v2 / (n_r + v2)).powf(alpha * n_r);
    }
    let log_h = (x + v2) * (v2 / (x + v2)).ln() + (n_r - x) * (n_r / (n_r - x)).ln();
    (alpha * n_r / (n_r + v2) * log_h).exp()
}

/// Bennett's relaxation B(x, v)^α = { (v²/(x+v²))^{x+v²} · eˣ }^α.
pub fn bennett_b<R: Real>(x: R, v: R, alpha: R) -> Result<R> {
    check_x_nonneg(x)?;
    check_alpha(alpha)?;
    if !(v > R::zero()) || !v.is_finite() {
        return Err(Error::Domain(format!("v must be finite and > 0, got {v}")));
    }
    let v2 = v * v;
    let log_b = (x + v2) * (v2 / (x + v2)).ln() + x;
    Ok((alpha * log_b).exp())
}

/// Bernstein's relaxation B₁(x, v)^α = exp{ −α x² / (2(v² + x/3)) }.
pub fn bernstein_b1<R: Real>(x: R, v: R, alpha: R) -> Result<R> {
    check_x_nonneg(x)?;
    check_alpha(alpha)?;
    if !(v > R::zero()) || !v.is_finite() {
        return Err(Error::Domain(format!("v must be finite and > 0, got {v}")));
    }
    let v2 = v * v;
    Ok((-alpha * x * x / (lit::<R>(2.0) * (v2 + x / lit::<R>(3.0)))).exp())
}
