//! Small adaptive-Simpson kernel used by the moment functionals that have no
//! closed form. f64 only; the simulation layers this feeds are f64 anyway.

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    // The negated comparison also halts on a non-finite delta (overflowing
    // integrand), which must surface as inf/NaN instead of recursing forever.
    if depth == 0 || !(delta.abs() > 15.0 * eps) {
        left + right + delta / 15.0
    } else {
        recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1)
    }
}

/// ∫_a^b f, refined until the local Richardson estimate meets `rel_tol`
/// relative to the first whole-interval pass.
pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(fa, fm, fb, b - a);
    let eps = rel_tol * whole.abs().max(1e-300);
    recurse(f, a, fa, b, fb, m, fm, whole, eps, 48)
}

/// ∫_lo^∞ f by doubling windows of initial width `scale`, stopping once a
/// window contributes below `rel_tol` of the running total.
pub(crate) fn integrate_right_tail(f: &dyn Fn(f64) -> f64, lo: f64, scale: f64) -> f64 {
    let mut acc = 0.0;
    let mut left = lo;
    let mut width = scale.max(1e-12);
    for _ in 0..64 {
        let piece = adaptive_simpson(f, left, left + width, 1e-12);
        acc += piece;
        if piece.abs() <= 1e-14 * acc.abs().max(1e-300) {
            break;
        }
        left += width;
        width *= 2.0;
    }
    acc
}

/// ∫_{−∞}^{hi} f, mirrored version of [`integrate_right_tail`].
pub(crate) fn integrate_left_tail(f: &dyn Fn(f64) -> f64, hi: f64, scale: f64) -> f64 {
    integrate_right_tail(&|x| f(2.0 * hi - x), hi, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_integrated_exactly() {
        let got = adaptive_simpson(&|x| x * x, 0.0, 3.0, 1e-12);
        assert!((got - 9.0).abs() <= 1e-12);
    }

    #[test]
    fn gaussian_mass_sums_to_one() {
        let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let body = adaptive_simpson(&phi, -8.0, 8.0, 1e-12);
        assert!((body - 1.0).abs() <= 1e-12);
        let right = integrate_right_tail(&phi, 0.0, 1.0);
        assert!((right - 0.5).abs() <= 1e-12);
        let left = integrate_left_tail(&phi, 0.0, 1.0);
        assert!((left - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn kinked_integrand_still_converges() {
        let got = adaptive_simpson(&|x: f64| x.abs().sqrt(), -1.0, 1.0, 1e-12);
        assert!((got - 4.0 / 3.0).abs() <= 1e-9);
    }
}
