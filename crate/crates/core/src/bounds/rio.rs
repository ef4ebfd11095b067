//! Range-based tail bounds built on the rate function
//! ℓ(t) = (t − ln t − 1) + t(eᵗ − 1)⁻¹ + ln(1 − e⁻ᵗ) and its conjugate.

use super::result::{BoundFamily, BoundResult};
use super::{check_alpha, check_x_nonneg};
use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Per-summand range data: m_i ≤ X_i ≤ M_i almost surely.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedRangeSpec<R: Real> {
    lower: Vec<R>,
    upper: Vec<R>,
}

impl<R: Real> BoundedRangeSpec<R> {
    pub fn new(lower: Vec<R>, upper: Vec<R>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::Domain(format!(
                "range spec needs matching nonempty bounds, got {} lower / {} upper",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (&m, &big_m)) in lower.iter().zip(&upper).enumerate() {
            if !m.is_finite() || !big_m.is_finite() || m > big_m {
                return Err(Error::Domain(format!(
                    "range {i} is invalid: [{m}, {big_m}]"
                )));
            }
        }
        Ok(BoundedRangeSpec { lower, upper })
    }

    /// n identical ranges [lo, hi].
    pub fn uniform(n: usize, lo: R, hi: R) -> Result<Self> {
        BoundedRangeSpec::new(vec![lo; n], vec![hi; n])
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    /// M²(n) = Σ (M_i − m_i)².
    pub fn m2(&self) -> R {
        self.lower
            .iter()
            .zip(&self.upper)
            .fold(R::zero(), |acc, (&m, &big_m)| {
                acc + (big_m - m) * (big_m - m)
            })
    }

    /// D(n) = Σ (M_i − m_i).
    pub fn d(&self) -> R {
        self.lower
            .iter()
            .zip(&self.upper)
            .fold(R::zero(), |acc, (&m, &big_m)| acc + (big_m - m))
    }

    /// Δ(n) = max_i (M_i − m_i).
    pub fn delta(&self) -> R {
        self.lower
            .iter()
            .zip(&self.upper)
            .fold(R::zero(), |acc, (&m, &big_m)| acc.max(big_m - m))
    }
}

const ELL_SMALL_T: f64 = 1e-3;

/// The formula exactly as printed; cancels catastrophically below t ≈ 10⁻³.
fn ell_naive<R: Real>(t: R) -> R {
    (t - t.ln() - R::one()) + t / (t.exp() - R::one()) + (R::one() - (-t).exp()).ln()
}

/// Algebraically equal regrouping that stays accurate as t → 0:
/// (t − 1) + t/expm1(t) + ln(−expm1(−t)/t).
fn ell_stable<R: Real>(t: R) -> R {
    (t - R::one()) + t / t.exp_m1() + ((-(-t).exp_m1()) / t).ln()
}

/// ℓ(t) for t > 0. ℓ(0⁺) = 0, ℓ ≥ 0, and ℓ(t) = t²/8 − t⁴/576 + O(t⁶) near 0.
pub fn rio_ell<R: Real>(t: R) -> Result<R> {
    if !(t > R::zero()) || !t.is_finite() {
        return Err(Error::Domain(format!("rio_ell needs finite t > 0, got {t}")));
    }
    Ok(if t < lit(ELL_SMALL_T) {
        ell_stable(t)
    } else {
        ell_naive(t)
    })
}

/// ℓ'(t), series below 10⁻³ and the exponential form above.
fn ell_prime<R: Real>(t: R) -> R {
    if t < lit(ELL_SMALL_T) {
        let t2 = t * t;
        t / lit(4.0) - t * t2 / lit(144.0) + t * t2 * t2 / lit(4320.0)
    } else {
        let em = (-t).exp();
        let one = R::one();
        one - t.recip() + (em * (one - t) - em * em) / ((one - em) * (one - em))
            + em / (one - em)
    }
}

/// Legendre conjugate ℓ*(x) = sup_{t>0} { xt − ℓ(t) } for x ∈ [0, 1).
///
/// ℓ' increases from 0 to 1, so the supremum is attained where ℓ'(t) = x;
/// the root is bracketed by doubling/halving on the sign of x − ℓ'(t) and
/// polished by golden section. Slopes x ≥ 1 are never attained (domain
/// error), and ℓ*(0) = 0.
pub fn rio_ell_star<R: Real>(x: R) -> Result<R> {
    if !(x >= R::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!("rio_ell_star needs x >= 0, got {x}")));
    }
    if x >= R::one() {
        return Err(Error::Domain(format!(
            "rio_ell_star diverges for x >= 1 (slope never attained), got {x}"
        )));
    }
    if x == R::zero() {
        return Ok(R::zero());
    }
    let two = lit::<R>(2.0);
    let mut lo = R::one();
    let mut hi = R::one();
    if x - ell_prime(R::one()) > R::zero() {
        while x - ell_prime(hi) > R::zero() {
            hi = hi * two;
            if hi > lit(1e12) {
                return Err(Error::Convergence(
                    "rio_ell_star bracket expansion ran away".into(),
                ));
            }
        }
        lo = hi / two;
    } else {
        while x - ell_prime(lo) <= R::zero() {
            lo = lo / two;
            if lo < lit(1e-18) {
                break;
            }
        }
        hi = lo * two;
    }

    let g = |t: R| x * t - rio_ell(t).expect("bracket stays positive");
    let ratio = lit::<R>(0.618_033_988_749_894_9);
    let tol = lit::<R>(1e-12);
    let mut t1 = hi - ratio * (hi - lo);
    let mut t2 = lo + ratio * (hi - lo);
    let mut f1 = g(t1);
    let mut f2 = g(t2);
    let mut iters = 0u32;
    while hi - lo > tol && iters < 200 {
        if f1 >= f2 {
            hi = t2;
            t2 = t1;
            f2 = f1;
            t1 = hi - ratio * (hi - lo);
            f1 = g(t1);
        } else {
            lo = t1;
            t1 = t2;
            f1 = f2;
            t2 = lo + ratio * (hi - lo);
            f2 = g(t2);
        }
        iters += 1;
    }
    Ok(g((lo + hi) / two).max(R::zero()))
}

/// MGF bound exp{ (D²/M²) · ℓ(M²t/D) } for the independent comparison sum of
/// range-bounded, mean-zero summands. t = 0 returns 1 exactly; a range spec
/// with every M_i = m_i has no scale to work with and is rejected.
pub fn rio_mgf_bound<R: Real>(t: R, range: &BoundedRangeSpec<R>) -> Result<R> {
    if !(t >= R::zero()) || !t.is_finite() {
        return Err(Error::Domain(format!("need finite t >= 0, got {t}")));
    }
    if t == R::zero() {
        return Ok(R::one());
    }
    let m2 = range.m2();
    if m2 == R::zero() {
        return Err(Error::Degenerate(
            "all ranges have zero width; the MGF bound has no scale".into(),
        ));
    }
    let d = range.d();
    Ok((d * d / m2 * rio_ell(m2 * t / d)?).exp())
}

/// Which printed range-based tail bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RioForm {
    /// (1 − α)⁻¹ exp{ −α(D²/M²) ℓ*(x/D) }, the conjugate-optimized form.
    YoungForm,
    /// ((D − x)/D)^{αx(2D−x)/M²}, a closed form with no transform inside.
    ClosedForm,
    /// exp{ −2x²/M² }, the α-free classical comparison point.
    HoeffdingAzuma,
    /// exp{ −αn ℓ*(x/(nΔ)) }, phrased in the largest single range Δ.
    DeltaForm,
}

/// Tail bound for Σ (X_i − E X_i) with m_i ≤ X_i ≤ M_i.
///
/// YoungForm and DeltaForm are defined on 0 ≤ x ≤ D(n) resp. 0 ≤ x ≤ nΔ(n)
/// and return 0 at the right endpoint (their interior limit); ClosedForm
/// reaches the same endpoints with explicit values 1 and 0.
pub fn rio_tail_bound<R: Real>(
    x: R,
    alpha: R,
    range: &BoundedRangeSpec<R>,
    form: RioForm,
) -> Result<BoundResult<R>> {
    check_x_nonneg(x)?;
    check_alpha(alpha)?;
    let m2 = range.m2();
    if m2 == R::zero() {
        return Err(Error::Degenerate(
            "all ranges have zero width; the tail bound has no scale".into(),
        ));
    }
    let d = range.d();
    let one = R::one();
    let lead = (one - alpha).recip();
    let family = if form == RioForm::HoeffdingAzuma {
        BoundFamily::HoeffdingAzuma
    } else {
        BoundFamily::Rio
    };
    let raw = match form {
        RioForm::YoungForm => {
            if x > d {
                return Err(Error::Domain(format!(
                    "YoungForm needs x <= D(n) = {d}, got {x}"
                )));
            }
            if x == d {
                R::zero()
            } else {
                lead * (-alpha * d * d / m2 * rio_ell_star(x / d)?).exp()
            }
        }
        RioForm::ClosedForm => {
            if x > d {
                return Err(Error::Domain(format!(
                    "ClosedForm needs x <= D(n) = {d}, got {x}"
                )));
            }
            if x == R::zero() {
                one
            } else if x == d {
                R::zero()
            } else {
                (alpha * x * (lit::<R>(2.0) * d - x) / m2 * ((d - x) / d).ln()).exp()
            }
        }
        RioForm::HoeffdingAzuma => (-lit::<R>(2.0) * x * x / m2).exp(),
        RioForm::DeltaForm => {
            let n_delta = lit::<R>(range.len() as f64) * range.delta();
            if x > n_delta {
                return Err(Error::Domain(format!(
                    "DeltaForm needs x <= n*Delta(n) = {n_delta}, got {x}"
                )));
            }
            if x == n_delta {
                R::zero()
            } else {
                (-alpha * lit::<R>(range.len() as f64) * rio_ell_star(x / n_delta)?).exp()
            }
        }
    };
    Ok(BoundResult::new(family, raw)
        .input("x", x)
        .input("d", d)
        .input("m2", m2)
        .input("delta", range.delta())
        .param("alpha", alpha))
}
