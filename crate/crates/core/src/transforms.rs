//! Convex-conjugate and parameter-tuning helpers shared by the bound families.

use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Convexity metadata attached to a transform integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    Concave,
    Unknown,
}

/// An interval of the real line with individually open or closed endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<R: Real> {
    pub lo: R,
    pub hi: R,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl<R: Real> Interval<R> {
    pub fn contains(&self, t: R) -> bool {
        let above = if self.lo_open { t > self.lo } else { t >= self.lo };
        let below = if self.hi_open { t < self.hi } else { t <= self.hi };
        above && below
    }

    /// The open positive half-line (0, ∞).
    pub fn positive() -> Self {
        Interval {
            lo: R::zero(),
            hi: R::infinity(),
            lo_open: true,
            hi_open: true,
        }
    }
}

/// A scalar function plus the metadata the optimizers need.
pub struct ScalarFunction<F, R: Real> {
    pub evaluator: F,
    pub domain: Interval<R>,
    pub convexity_hint: Convexity,
}

impl<F: Fn(R) -> R, R: Real> ScalarFunction<F, R> {
    pub fn new(evaluator: F, domain: Interval<R>, convexity_hint: Convexity) -> Self {
        ScalarFunction {
            evaluator,
            domain,
            convexity_hint,
        }
    }

    /// Convex function on the open positive half-line, the shape every bound
    /// in this crate feeds to [`young_transform`].
    pub fn convex_positive(evaluator: F) -> Self {
        ScalarFunction::new(evaluator, Interval::positive(), Convexity::Convex)
    }
}

/// Outcome of a one-dimensional search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationResult<R: Real> {
    pub arg: R,
    pub value: R,
    pub iterations: u32,
    pub bracket: (R, R),
}

const GOLDEN_MAX_ITER: u32 = 200;
const BRACKET_CAP: f64 = 1e12;
const BRACKET_FLOOR: f64 = 1e-18;

/// Golden-section maximization of `g` on `[lo, hi]`, shrinking the bracket to
/// `tol` (absolute width) or `GOLDEN_MAX_ITER` splits, whichever comes first.
fn golden_max<R: Real>(g: impl Fn(R) -> R, lo0: R, hi0: R, tol: R) -> (R, R, u32) {
    let ratio = lit::<R>(0.618_033_988_749_894_9);
    let mut lo = lo0;
    let mut hi = hi0;
    let mut t1 = hi - ratio * (hi - lo);
    let mut t2 = lo + ratio * (hi - lo);
    let mut f1 = g(t1);
    let mut f2 = g(t2);
    let mut iters = 0u32;
    while hi - lo > tol && iters < GOLDEN_MAX_ITER {
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
    let mid = (lo + hi) / lit(2.0);
    (mid, g(mid), iters)
}

fn golden_min<R: Real>(g: impl Fn(R) -> R, lo: R, hi: R, tol: R) -> (R, R, u32) {
    let (arg, value, iters) = golden_max(|t| -g(t), lo, hi, tol);
    (arg, -value, iters)
}

/// Legendre–Young conjugate f*(x) = sup_{t>0} { x·t − f(t) }.
///
/// The supremum is located by value-based bracket expansion (doubling up,
/// halving down) followed by golden-section refinement. Doubling past 10¹²
/// means x exceeds the slopes f attains and the conjugate is infinite; that
/// is reported as a divergence error rather than a large number.
pub fn young_transform<F: Fn(R) -> R, R: Real>(
    f: &ScalarFunction<F, R>,
    x: R,
) -> Result<OptimizationResult<R>> {
    if x < R::zero() || !x.is_finite() {
        return Err(Error::Domain(format!(
            "young_transform evaluated at x = {x}; needs finite x >= 0"
        )));
    }
    if f.convexity_hint == Convexity::Concave {
        return Err(Error::Domain(
            "young_transform requires a convex integrand".into(),
        ));
    }
    let g = |t: R| x * t - (f.evaluator)(t);

    let mut b = R::one();
    if !f.domain.contains(b) {
        let two = lit::<R>(2.0);
        b = if f.domain.hi.is_finite() && f.domain.lo > -R::infinity() {
            (f.domain.lo + f.domain.hi) / two
        } else if f.domain.hi.is_finite() {
            f.domain.hi - R::one()
        } else {
            f.domain.lo + R::one()
        };
        if !f.domain.contains(b) {
            return Err(Error::Domain("empty or malformed search domain".into()));
        }
    }
    let two = lit::<R>(2.0);
    let cap = lit::<R>(BRACKET_CAP);
    let floor = lit::<R>(BRACKET_FLOOR);
    let mut a = b / two;
    let mut c = b * two;
    if f.domain.hi.is_finite() && c > f.domain.hi {
        c = f.domain.hi;
    }
    let mut expansions = 0u32;
    let mut gb = g(b);
    let mut gc = g(c);
    while gc > gb {
        a = b;
        b = c;
        gb = gc;
        c = c * two;
        if f.domain.hi.is_finite() && c > f.domain.hi {
            c = f.domain.hi;
        }
        if c > cap {
            return Err(Error::Divergence(format!(
                "young_transform bracket exceeded {BRACKET_CAP:e}; slope x = {x} is not attained"
            )));
        }
        if c == b {
            break;
        }
        gc = g(c);
        expansions += 1;
    }
    let mut ga = g(a);
    while ga > gb && a > floor {
        c = b;
        b = a;
        gb = ga;
        a = a / two;
        if f.domain.lo > R::zero() && a < f.domain.lo {
            a = f.domain.lo;
        }
        ga = g(a);
        expansions += 1;
    }

    let tol = lit::<R>(1e-12);
    let (arg, value, golden_iters) = golden_max(g, a, c, tol);
    Ok(OptimizationResult {
        arg,
        value,
        iterations: expansions + golden_iters,
        bracket: (a, c),
    })
}

/// Minimizes a bound over the free parameter α ∈ (0, 1).
///
/// A 64-point scan over [10⁻⁶, 1 − 10⁻⁶] seeds a golden-section refinement in
/// the best point's grid neighborhood. A scan that sees a constant function
/// (an α-free bound) returns α = 1/2 directly, and exact ties between grid
/// points also resolve toward 1/2.
pub fn minimize_over_alpha<R: Real>(bound: impl Fn(R) -> R) -> OptimizationResult<R> {
    const SCAN: usize = 64;
    let lo = lit::<R>(1e-6);
    let hi = R::one() - lit::<R>(1e-6);
    let half = lit::<R>(0.5);
    let step = (hi - lo) / lit::<R>((SCAN - 1) as f64);

    let mut grid = [R::zero(); SCAN];
    let mut vals = [R::zero(); SCAN];
    for i in 0..SCAN {
        grid[i] = lo + step * lit::<R>(i as f64);
        vals[i] = bound(grid[i]);
    }
    let constant = vals.iter().all(|v| *v == vals[0]);
    if constant {
        return OptimizationResult {
            arg: half,
            value: bound(half),
            iterations: SCAN as u32,
            bracket: (lo, hi),
        };
    }
    let mut best = 0usize;
    for i in 1..SCAN {
        let closer = (grid[i] - half).abs() < (grid[best] - half).abs();
        if vals[i] < vals[best] || (vals[i] == vals[best] && closer) {
            best = i;
        }
    }
    let blo = if best == 0 { lo } else { grid[best - 1] };
    let bhi = if best == SCAN - 1 { hi } else { grid[best + 1] };
    let (arg, value, iters) = golden_min(&bound, blo, bhi, lit(1e-12));
    OptimizationResult {
        arg,
        value,
        iterations: SCAN as u32 + iters,
        bracket: (blo, bhi),
    }
}

/// How the truncation level y is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationMode {
    /// y = 3nx / (2p·ln n), the closed-form rule; requires n ≥ 3.
    DefaultRule,
    /// 256-point log-spaced scan of [x·10⁻³, x·10³] plus golden refinement.
    NumericScan,
}

/// Picks a truncation level for the two-parameter tail bounds.
///
/// `n` enters only through the default rule and may be any real ≥ 3.
pub fn optimize_truncation_y<R: Real>(
    bound: impl Fn(R) -> R,
    x: R,
    p: R,
    n: R,
    mode: TruncationMode,
) -> Result<OptimizationResult<R>> {
    if x <= R::zero() || !x.is_finite() {
        return Err(Error::Domain(format!(
            "truncation search needs finite x > 0, got {x}"
        )));
    }
    match mode {
        TruncationMode::DefaultRule => {
            if !(n >= lit(3.0)) {
                return Err(Error::Domain(format!(
                    "default truncation rule needs n >= 3 so that ln n > 1, got n = {n}"
                )));
            }
            if p <= R::zero() {
                return Err(Error::Domain(format!(
                    "default truncation rule needs p > 0, got p = {p}"
                )));
            }
            let y = lit::<R>(3.0) * n * x / (lit::<R>(2.0) * p * n.ln());
            Ok(OptimizationResult {
                arg: y,
                value: bound(y),
                iterations: 0,
                bracket: (y, y),
            })
        }
        TruncationMode::NumericScan => {
            const SCAN: usize = 256;
            let lo = x * lit::<R>(1e-3);
            let hi = x * lit::<R>(1e3);
            let log_lo = lo.ln();
            let log_step = (hi.ln() - log_lo) / lit::<R>((SCAN - 1) as f64);
            let mut best_i = 0usize;
            let mut best_y = lo;
            let mut best_v = bound(lo);
            for i in 1..SCAN {
                let y = (log_lo + log_step * lit::<R>(i as f64)).exp();
                let v = bound(y);
                if v < best_v {
                    best_i = i;
                    best_y = y;
                    best_v = v;
                }
            }
            let blo = if best_i == 0 {
                best_y
            } else {
                (log_lo + log_step * lit::<R>((best_i - 1) as f64)).exp()
            };
            let bhi = if best_i == SCAN - 1 {
                best_y
            } else {
                (log_lo + log_step * lit::<R>((best_i + 1) as f64)).exp()
            };
            let (arg, value, iters) = golden_min(&bound, blo, bhi, lit(1e-12));
            Ok(OptimizationResult {
                arg,
                value,
                iterations: SCAN as u32 + iters,
                bracket: (blo, bhi),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic(a: f64) -> impl Fn(f64) -> f64 {
        move |t: f64| a * t * t
    }

    #[test]
    fn young_of_quadratic_matches_closed_form() {
        let a = 0.7;
        let f = ScalarFunction::convex_positive(quadratic(a));
        for i in 0..=8 {
            let x = 12.5 * i as f64;
            let r = young_transform(&f, x).unwrap();
            let exact = x * x / (4.0 * a);
            assert!(
                (r.value - exact).abs() <= 1e-8 * exact.max(1.0),
                "x={x}: got {} want {exact}",
                r.value
            );
            if x > 0.0 {
                assert!((r.arg - x / (2.0 * a)).abs() <= 1e-6 * (x / (2.0 * a)));
            }
        }
    }

    #[test]
    fn young_of_power_matches_conjugate_exponent() {
        let q = 1.5;
        let tau1 = 0.8;
        let f = ScalarFunction::convex_positive(move |t: f64| tau1 * t.powf(q));
        let r = young_transform(&f, 2.0).unwrap();
        assert!((r.value - 1.851_851_851_851_851_9).abs() <= 1e-9 * 1.85);
        let a1 = 0.231_481_481_481_481_48;
        let p = 3.0;
        assert!((r.value - a1 * 2.0f64.powf(p)).abs() <= 1e-9);
    }

    #[test]
    fn young_at_zero_of_nonnegative_function_is_zero() {
        let f = ScalarFunction::convex_positive(quadratic(1.0));
        let r = young_transform(&f, 0.0).unwrap();
        assert!(r.value.abs() <= 1e-12, "got {}", r.value);
        let g = ScalarFunction::convex_positive(|t: f64| 0.25 * t.powf(2.0));
        let r = young_transform(&g, 0.0).unwrap();
        assert!(r.value.abs() <= 1e-12);
    }

    #[test]
    fn young_reports_divergence_when_slope_unattained() {
        let f = ScalarFunction::convex_positive(|t: f64| (1.0 + t * t).sqrt());
        match young_transform(&f, 2.0) {
            Err(Error::Divergence(_)) => {}
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn young_rejects_concave_hint_and_negative_x() {
        let f = ScalarFunction::new(|t: f64| t.sqrt(), Interval::positive(), Convexity::Concave);
        assert!(matches!(young_transform(&f, 1.0), Err(Error::Domain(_))));
        let g = ScalarFunction::convex_positive(quadratic(1.0));
        assert!(matches!(young_transform(&g, -0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn alpha_search_returns_half_for_constant_bound() {
        let r = minimize_over_alpha(|_: f64| 0.25);
        assert_eq!(r.arg, 0.5);
        assert_eq!(r.value, 0.25);
    }

    #[test]
    fn alpha_search_beats_every_scan_point() {
        let bound = |al: f64| {
            let x: f64 = 10.0;
            let (m, bn) = (1.0, 100.0);
            (1.0 - al).recip() * (-al * x * x / (bn * (1.0 + (2.0 * x * m / bn).sqrt()) + x * m)).exp()
        };
        let r = minimize_over_alpha(bound);
        for i in 0..=90 {
            let al = 0.005 + 0.011 * i as f64;
            assert!(r.value <= bound(al) + 1e-12, "alpha={al}");
        }
        assert!(r.arg > 0.0 && r.arg < 1.0);
    }

    #[test]
    fn alpha_search_invariant_under_finer_scan() {
        let bound = |al: f64| {
            let (x, p, kn) = (5.0f64, 0.5f64, 2.0f64);
            let bp = kn.powf(1.0 / (2.0 - p));
            if al * x <= bp {
                2.0 / (1.0 - al) * (-al * al * x * x / (2.0 * kn)).exp()
            } else {
                2.0 / (1.0 - al) * (-(al * x).powf(p) / 2.0).exp()
            }
        };
        let coarse = minimize_over_alpha(bound);
        let mut best = (0.5f64, f64::INFINITY);
        for i in 0..640 {
            let al = 1e-6 + (1.0 - 2e-6) * i as f64 / 639.0;
            if bound(al) < best.1 {
                best = (al, bound(al));
            }
        }
        let (fine_arg, fine_val, _) =
            super::golden_min(bound, (best.0 - 2e-3).max(1e-6), best.0 + 2e-3, 1e-13);
        assert!((coarse.value - fine_val).abs() <= 1e-10);
        assert!((coarse.arg - fine_arg).abs() <= 1e-8);
    }

    #[test]
    fn default_truncation_rule_matches_worked_value() {
        let n = std::f64::consts::E.powi(2);
        let r = optimize_truncation_y(|_| 0.0, 1.0, 2.0, n, TruncationMode::DefaultRule).unwrap();
        let want = 3.0 * n / 8.0;
        assert!((r.arg - want).abs() <= 1e-12 * want, "got {} want {want}", r.arg);
        assert!(matches!(
            optimize_truncation_y(|_| 0.0, 1.0, 2.0, 2.9, TruncationMode::DefaultRule),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn numeric_scan_never_loses_to_default_rule() {
        let (x, p, n) = (10.0f64, 3.0, 1000.0);
        let (bn, ap, al) = (1000.0f64, 1000.0, 0.5);
        let bound = move |y: f64| {
            let hx = al * x / y;
            let v = bn.sqrt() / y;
            let nn = n;
            let h = if hx > nn {
                0.0
            } else {
                let v2 = v * v;
                let base1 = (v2 / (hx + v2)).powf(hx + v2);
                let base2 = if hx == nn { 1.0 } else { (nn / (nn - hx)).powf(nn - hx) };
                (base1 * base2).powf(al * nn / (nn + v2))
            };
            (1.0 - al).recip() * h + ap / y.powf(p)
        };
        let rule = optimize_truncation_y(bound, x, p, n, TruncationMode::DefaultRule).unwrap();
        let scan = optimize_truncation_y(bound, x, p, n, TruncationMode::NumericScan).unwrap();
        assert!(scan.value <= rule.value * (1.0 + 1e-9) + 1e-18);
        assert!((rule.arg - 723.824_136_505_419_71).abs() <= 1e-9 * 723.8);
    }
}
