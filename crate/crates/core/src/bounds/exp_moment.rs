//! MGF and tail control for summands with E exp{a|X|ᵖ} ≤ 1 + K/n, p > 1.

use super::result::{BoundFamily, BoundResult};
use super::{check_alpha, check_x_nonneg};
use crate::error::{Error, Result};
use crate::real::{lit, lit_u64, Real};

/// The derived constants the exponential-moment bounds are phrased in.
///
/// All fields are determined by the four inputs (p, a, K, τ₁/τ); they are
/// materialized once so the MGF and tail bounds are cheap closed forms and so
/// tests can assert the defining identities directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpMomentConstants<R: Real> {
    pub p: R,
    /// Conjugate exponent q = p/(p − 1).
    pub q: R,
    pub a: R,
    pub k: R,
    /// c = K(2/a)^{1/(p−1)}, the coefficient of the MGF remainder.
    pub c: R,
    /// τ = (pa)^{−(q−1)}/q, so that τtᵠ is the Young partner of a|x|ᵖ.
    pub tau: R,
    /// τ₁ = tau1_factor · τ, the inflated rate the MGF is closed under.
    pub tau1: R,
    /// Smallest t ≥ a/2 with 1 + K + c·tᵠ·e^{τtᵠ} ≤ e^{τ₁tᵠ}.
    pub t1: R,
    /// x₁ = qτ₁t₁^{q−1}, the threshold separating the two tail regimes.
    pub x1: R,
    /// a₁ = (qτ₁)^{−(p−1)}/p, the large-deviation rate.
    pub a1: R,
    /// K₁ = eᵃ + K, a crude uniform MGF cap below t₁.
    pub k1: R,
    /// A = max{2K₁/a², 4τ₁t₁ᵠ/a²}, the quadratic MGF rate below t₁.
    pub big_a: R,
    /// B = inf over s ∈ (0, x₁] of sup_t (ts − At²)/s², the quadratic tail rate.
    pub big_b: R,
}

const T1_GRID_RATIO: f64 = 1.05;
const T1_CAP_FACTOR: f64 = 1e6;

fn mgf_closure_holds<R: Real>(t: R, q: R, k: R, c: R, tau: R, tau1: R) -> bool {
    let tq = t.powf(q);
    let m = tau * tq;
    let lhs_log = m + ((R::one() + k) * (-m).exp() + c * tq).ln();
    lhs_log <= tau1 * tq
}

/// Derives every constant in [`ExpMomentConstants`] from (p, a, K, τ₁/τ).
///
/// The t₁ search walks a geometric grid (ratio 1.05) up from a/2 and then
/// bisects the first bracketing pair to 10⁻¹² relative width, returning the
/// verified endpoint. Walking past 10⁶·a without the closure condition ever
/// holding is a convergence error; it means τ₁ is too close to τ for the
/// chosen K.
pub fn exp_moment_constants<R: Real>(
    p: R,
    a: R,
    k: R,
    tau1_factor: R,
) -> Result<ExpMomentConstants<R>> {
    if !(p > R::one()) || !p.is_finite() {
        return Err(Error::Domain(format!("need p > 1, got {p}")));
    }
    if !(a > R::zero()) || !a.is_finite() {
        return Err(Error::Domain(format!("need a > 0, got {a}")));
    }
    if !(k >= R::zero()) || !k.is_finite() {
        return Err(Error::Domain(format!("need K >= 0, got {k}")));
    }
    if !(tau1_factor > R::one()) || !tau1_factor.is_finite() {
        return Err(Error::Domain(format!(
            "need tau1_factor > 1 so the closure condition can hold, got {tau1_factor}"
        )));
    }
    let one = R::one();
    let two = lit::<R>(2.0);
    let q = p / (p - one);
    let tau = (p * a).powf(-(q - one)) / q;
    let tau1 = tau1_factor * tau;
    let a1 = (q * tau1).powf(-(p - one)) / p;
    let c = k * (two / a).powf((p - one).recip());

    let start = a / two;
    let t1 = if mgf_closure_holds(start, q, k, c, tau, tau1) {
        start
    } else {
        let cap = a * lit::<R>(T1_CAP_FACTOR);
        let ratio = lit::<R>(T1_GRID_RATIO);
        let mut lo = start;
        let mut hi = start * ratio;
        loop {
            if hi > cap {
                return Err(Error::Convergence(format!(
                    "MGF closure condition not satisfied below t = {cap}; \
                     tau1_factor = {tau1_factor} is too close to 1 for K = {k}"
                )));
            }
            if mgf_closure_holds(hi, q, k, c, tau, tau1) {
                break;
            }
            lo = hi;
            hi = hi * ratio;
        }
        for _ in 0..200 {
            if hi - lo <= lit::<R>(1e-12) * hi {
                break;
            }
            let mid = (lo + hi) / two;
            if mgf_closure_holds(mid, q, k, c, tau, tau1) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };

    let x1 = q * tau1 * t1.powf(q - one);
    let k1 = a.exp() + k;
    let big_a = (two * k1 / (a * a)).max(lit::<R>(4.0) * tau1 * t1.powf(q) / (a * a));

    const B_GRID: usize = 200;
    let s_lo = x1 * lit::<R>(1e-6);
    let log_lo = s_lo.ln();
    let log_step = (x1.ln() - log_lo) / lit::<R>((B_GRID - 1) as f64);
    let mut big_b = R::infinity();
    for i in 0..B_GRID {
        let s = (log_lo + log_step * lit::<R>(i as f64)).exp();
        let t_star = (s / (two * big_a)).min(t1);
        let ratio = (t_star * s - big_a * t_star * t_star) / (s * s);
        if ratio < big_b {
            big_b = ratio;
        }
    }

    Ok(ExpMomentConstants {
        p,
        q,
        a,
        k,
        c,
        tau,
        tau1,
        t1,
        x1,
        a1,
        k1,
        big_a,
        big_b,
    })
}

/// MGF bound for the independent comparison sum:
///
///   E exp{t·S_n*} ≤ exp{nτ₁tᵠ}  for t ≥ t₁,
///   E exp{t·S_n*} ≤ exp{nAt²}   for t ≤ t₁,
///
/// with the smaller of the two at t = t₁ itself.
pub fn exp_moment_mgf_bound<R: Real>(
    t: R,
    n: u64,
    constants: &ExpMomentConstants<R>,
) -> Result<R> {
    if !(t >= R::zero()) || !t.is_finite() {
        return Err(Error::Domain(format!("need finite t >= 0, got {t}")));
    }
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let n_r = lit_u64::<R>(n);
    let above = || (n_r * constants.tau1 * t.powf(constants.q)).exp();
    let below = || (n_r * constants.big_a * t * t).exp();
    Ok(if t > constants.t1 {
        above()
    } else if t < constants.t1 {
        below()
    } else {
        above().min(below())
    })
}

/// Tail bound in the two regimes split at x = n·x₁:
///
///   P(max_k S_k ≥ x) ≤ (1 − α)⁻¹ exp{ −a₁ α xᵖ / n^{p−1} }  for x ≥ n·x₁,
///   P(max_k S_k ≥ x) ≤ (1 − α)⁻¹ exp{ −B α x² / n }          for x ≤ n·x₁,
///
/// with the smaller of the two at the threshold itself. The bound is not
/// guaranteed continuous across the threshold for p ≠ 2; comparisons should
/// treat the regimes separately.
pub fn exp_moment_tail_bound<R: Real>(
    x: R,
    n: u64,
    alpha: R,
    constants: &ExpMomentConstants<R>,
) -> Result<BoundResult<R>> {
    check_x_nonneg(x)?;
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let n_r = lit_u64::<R>(n);
    let lead = (R::one() - alpha).recip();
    let threshold = n_r * constants.x1;
    let upper = || {
        lead * (-constants.a1 * alpha * x.powf(constants.p) / n_r.powf(constants.p - R::one()))
            .exp()
    };
    let lower = || lead * (-constants.big_b * alpha * x * x / n_r).exp();
    let raw = if x > threshold {
        upper()
    } else if x < threshold {
        lower()
    } else {
        upper().min(lower())
    };
    Ok(BoundResult::new(BoundFamily::ExpMoment, raw)
        .input("x", x)
        .input("n", lit_u64(n))
        .input("p", constants.p)
        .input("a", constants.a)
        .input("k", constants.k)
        .param("alpha", alpha))
}
