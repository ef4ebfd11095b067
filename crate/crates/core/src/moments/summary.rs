//! Aggregation of per-marginal functionals into the sums the bounds take.

use super::dist::DistributionSpec;
use crate::bounds::BoundedRangeSpec;
use crate::error::{Error, Result};

/// Every aggregate moment quantity the bound families consume, computed once
/// from a list of marginal laws.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSummary {
    pub n: usize,
    /// B_n = Σ E X_i².
    pub b_n: f64,
    /// (y, Σ E X_i² 1{X_i ≤ y}) for each requested truncation level.
    pub b_n_of_y: Vec<(f64, f64)>,
    /// (y, Σ P(X_i > y)) for the same levels.
    pub tail_sum_of_y: Vec<(f64, f64)>,
    /// V_n = Σ E|X_i|^p at `p_fuk`.
    pub v_n: f64,
    pub p_fuk: f64,
    /// A_p = Σ weak p-th norms at `p_fuk`.
    pub a_p: f64,
    /// K_n = Σ E X_i² e^{|X_i|^p} at `p_semi`.
    pub k_n: f64,
    pub p_semi: f64,
    /// Σ E e^{a|X_i|^p} at (`a_exp`, `p_exp`), None if any term diverges.
    pub k_exp: Option<f64>,
    pub p_exp: f64,
    pub a_exp: f64,
    /// Smallest scale M satisfying the Bernstein moment condition up to
    /// k = 10, None when no finite M works.
    pub bernstein_m: Option<f64>,
    /// Per-summand ranges, None when any marginal is unbounded.
    pub range: Option<BoundedRangeSpec<f64>>,
}

const BERNSTEIN_K_MAX: u32 = 10;

/// Computes every aggregate in [`MomentSummary`].
pub fn moment_summary(
    dists: &[DistributionSpec],
    p_fuk: f64,
    p_semi: f64,
    p_exp: f64,
    a_exp: f64,
    y_grid: &[f64],
) -> Result<MomentSummary> {
    if dists.is_empty() {
        return Err(Error::Domain("need at least one marginal law".into()));
    }
    if !(p_fuk >= 2.0) {
        return Err(Error::Domain(format!("p_fuk must be >= 2, got {p_fuk}")));
    }
    for &y in y_grid {
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::Domain(format!("truncation levels must be > 0, got {y}")));
        }
    }

    let b_n = dists.iter().map(|d| d.second_moment()).sum();
    let mut b_n_of_y = Vec::with_capacity(y_grid.len());
    let mut tail_sum_of_y = Vec::with_capacity(y_grid.len());
    for &y in y_grid {
        let mut trunc = 0.0;
        let mut tail = 0.0;
        for d in dists {
            trunc += d.truncated_second_moment(y)?;
            tail += d.survival(y);
        }
        b_n_of_y.push((y, trunc));
        tail_sum_of_y.push((y, tail));
    }

    let mut v_n = 0.0;
    let mut a_p = 0.0;
    let mut k_n = 0.0;
    let mut k_exp = Some(0.0);
    for d in dists {
        v_n += d.abs_moment(p_fuk)?;
        a_p += d.weak_norm_p(p_fuk)?;
        k_n += d.semi_exp_second_moment(p_semi)?;
        k_exp = match (k_exp, d.exp_abs_moment(a_exp, p_exp)?) {
            (Some(acc), Some(term)) => Some(acc + term),
            _ => None,
        };
    }

    let bernstein_m = smallest_bernstein_scale(dists, BERNSTEIN_K_MAX);

    let mut lows = Vec::with_capacity(dists.len());
    let mut highs = Vec::with_capacity(dists.len());
    let mut bounded = true;
    for d in dists {
        match d.range() {
            Some((lo, hi)) => {
                lows.push(lo);
                highs.push(hi);
            }
            None => {
                bounded = false;
                break;
            }
        }
    }
    let range = if bounded {
        Some(BoundedRangeSpec::new(lows, highs)?)
    } else {
        None
    };

    Ok(MomentSummary {
        n: dists.len(),
        b_n,
        b_n_of_y,
        tail_sum_of_y,
        v_n,
        p_fuk,
        a_p,
        k_n,
        p_semi,
        k_exp,
        p_exp,
        a_exp,
        bernstein_m,
        range,
    })
}

/// Outcome of checking |Σ E X_iᵏ| ≤ ½ k! M^{k−2} B_n for 2 ≤ k ≤ k_max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinCheck {
    pub holds: bool,
    /// k with the largest ratio of attained to allowed moment.
    pub worst_k: u32,
    pub worst_ratio: f64,
    pub k_max: u32,
}

/// Checks the Bernstein moment condition at scale `m`.
pub fn bernstein_condition_check(
    dists: &[DistributionSpec],
    m: f64,
    k_max: u32,
) -> Result<BernsteinCheck> {
    if dists.is_empty() {
        return Err(Error::Domain("need at least one marginal law".into()));
    }
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::Domain(format!("Bernstein scale must be > 0, got {m}")));
    }
    if k_max < 2 {
        return Err(Error::Domain(format!("k_max must be >= 2, got {k_max}")));
    }
    let b_n: f64 = dists.iter().map(|d| d.second_moment()).sum();
    if b_n <= 0.0 {
        return Err(Error::Degenerate("all laws have zero variance".into()));
    }
    let mut worst_k = 2;
    let mut worst_ratio = 0.0;
    let mut factorial = 2.0;
    for k in 2..=k_max {
        if k > 2 {
            factorial *= k as f64;
        }
        let attained: f64 = dists.iter().map(|d| d.kth_moment(k)).sum::<f64>().abs();
        let allowed = 0.5 * factorial * m.powi(k as i32 - 2) * b_n;
        let ratio = attained / allowed;
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst_k = k;
        }
    }
    Ok(BernsteinCheck {
        holds: worst_ratio <= 1.0 + 1e-12,
        worst_k,
        worst_ratio,
        k_max,
    })
}

/// Smallest M verifying the Bernstein condition up to `k_max`, found by
/// bisection on the (monotone in M) check. Moments are computed once; the
/// bisection itself is arithmetic.
pub fn smallest_bernstein_scale(dists: &[DistributionSpec], k_max: u32) -> Option<f64> {
    let b_n: f64 = dists.iter().map(|d| d.second_moment()).sum();
    if b_n <= 0.0 {
        return None;
    }
    let attained: Vec<(u32, f64, f64)> = (2..=k_max)
        .map(|k| {
            let mut factorial = 1.0;
            for j in 2..=k {
                factorial *= j as f64;
            }
            let sum = dists.iter().map(|d| d.kth_moment(k)).sum::<f64>().abs();
            (k, sum, factorial)
        })
        .collect();
    let holds = |m: f64| {
        attained.iter().all(|&(k, sum, factorial)| {
            sum <= 0.5 * factorial * m.powi(k as i32 - 2) * b_n * (1.0 + 1e-12)
        })
    };
    let mut hi = dists
        .iter()
        .filter_map(|d| d.range().map(|(lo, h)| lo.abs().max(h.abs())))
        .fold(0.0f64, f64::max);
    if hi <= 0.0 {
        hi = (b_n / dists.len() as f64).sqrt();
    }
    let mut doublings = 0;
    while !holds(hi) {
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::dist::{rademacher, DistKind};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn rademacher_aggregates() {
        let dists: Vec<_> = (0..50).map(|_| rademacher()).collect();
        let s = moment_summary(&dists, 2.0, 0.5, 2.0, 0.1, &[0.5, 2.0]).unwrap();
        assert_eq!(s.n, 50);
        assert_eq!(s.b_n, 50.0);
        assert_eq!(s.v_n, 50.0);
        assert_eq!(s.a_p, 50.0);
        assert!(rel(s.k_n, 50.0 * 1f64.exp()) <= 1e-13);
        assert!(rel(s.k_exp.unwrap(), 50.0 * 0.1f64.exp()) <= 1e-12);
        assert_eq!(s.b_n_of_y[0], (0.5, 25.0));
        assert_eq!(s.b_n_of_y[1], (2.0, 50.0));
        assert_eq!(s.tail_sum_of_y[0].1, 25.0);
        assert_eq!(s.tail_sum_of_y[1].1, 0.0);
        let range = s.range.unwrap();
        assert_eq!(range.d(), 100.0);
        assert_eq!(range.m2(), 200.0);
        let m = s.bernstein_m.unwrap();
        assert!(rel(m, 1.0 / 12.0f64.sqrt()) <= 1e-6, "m = {m}");
    }

    #[test]
    fn gaussian_marginal_disables_range_and_exp_moment_when_divergent() {
        let dists = vec![
            DistributionSpec::new(DistKind::CenteredGaussian { sigma: 1.0 }, true).unwrap(),
            rademacher(),
        ];
        let s = moment_summary(&dists, 2.0, 0.5, 2.0, 0.5, &[1.0]).unwrap();
        assert!(s.range.is_none());
        assert!(s.k_exp.is_none());
        let s2 = moment_summary(&dists, 2.0, 0.5, 2.0, 0.49, &[1.0]).unwrap();
        assert!(s2.k_exp.is_some());
    }

    #[test]
    fn bernstein_check_ties_at_k_two_and_flags_failures() {
        let dists: Vec<_> = (0..20).map(|_| rademacher()).collect();
        let ok = bernstein_condition_check(&dists, 1.0, 20).unwrap();
        assert!(ok.holds);
        assert_eq!(ok.worst_k, 2);
        assert!(rel(ok.worst_ratio, 1.0) <= 1e-14);

        let g = vec![DistributionSpec::new(DistKind::CenteredGaussian { sigma: 1.0 }, true).unwrap()];
        let at_one = bernstein_condition_check(&g, 1.0, 10).unwrap();
        assert!(at_one.holds);
        assert_eq!(at_one.worst_k, 2);

        let too_small = bernstein_condition_check(&g, 0.4, 10).unwrap();
        assert!(!too_small.holds);
        // Gaussian even moments: ratio_k = (k-1)!! / ((k!/2) 0.4^{k-2});
        // k=4 -> 1.5625, k=6 -> 1.6276.., k=8 -> 1.2716.. so the worst is 6.
        assert_eq!(too_small.worst_k, 6);
        assert!(rel(too_small.worst_ratio, 15.0 / (360.0 * 0.4f64.powi(4))) <= 1e-12);
    }

    #[test]
    fn smallest_scale_is_minimal() {
        let dists: Vec<_> = (0..10).map(|_| rademacher()).collect();
        let m = smallest_bernstein_scale(&dists, 10).unwrap();
        assert!(bernstein_condition_check(&dists, m * 1.001, 10).unwrap().holds);
        assert!(!bernstein_condition_check(&dists, m * 0.999, 10).unwrap().holds);
    }

    #[test]
    fn summary_rejects_bad_parameters() {
        let dists = vec![rademacher()];
        assert!(moment_summary(&dists, 1.5, 0.5, 2.0, 0.1, &[1.0]).is_err());
        assert!(moment_summary(&dists, 2.0, 0.5, 2.0, 0.1, &[-1.0]).is_err());
        assert!(moment_summary(&[], 2.0, 0.5, 2.0, 0.1, &[1.0]).is_err());
    }
}
