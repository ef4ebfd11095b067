//! Monte Carlo machinery: tail estimation with exact confidence intervals,
//! paired NA-versus-independent comparisons, bound domination checks, and a
//! supermartingale maximal-moment check.
//!
//! Replicates are distributed over threads with rayon, but every replicate
//! draws from its own counter stream and results are reduced in replicate
//! order, so output is identical for any thread count.

use rayon::prelude::*;

use crate::bounds::BoundResult;
use crate::error::{Error, Result};
use crate::rng::{replicate_key, CounterRng};
use crate::sampler::{NAModel, PreparedModel, SamplePath};

/// Which functional of the path a tail probability refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatisticKind {
    /// max_k (X_1 + … + X_k)
    MaxPrefix,
    /// X_1 + … + X_n
    FinalSum,
}

impl StatisticKind {
    pub fn id(&self) -> &'static str {
        match self {
            StatisticKind::MaxPrefix => "max_prefix",
            StatisticKind::FinalSum => "final_sum",
        }
    }

    fn eval(&self, path: &SamplePath) -> f64 {
        match self {
            StatisticKind::MaxPrefix => path.running_max,
            StatisticKind::FinalSum => *path.prefix_sums.last().expect("nonempty path"),
        }
    }
}

/// Convex test functions for the comparison-with-independence checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvexTestFunction {
    /// s ↦ exp(t s); nondecreasing when t ≥ 0.
    Exponential { t: f64 },
    /// s ↦ (s − a)²; convex but not monotone.
    ShiftedSquare { a: f64 },
    /// s ↦ max(s, 0); nondecreasing.
    PositivePart,
}

impl ConvexTestFunction {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            ConvexTestFunction::Exponential { t } => (t * s).exp(),
            ConvexTestFunction::ShiftedSquare { a } => (s - a) * (s - a),
            ConvexTestFunction::PositivePart => s.max(0.0),
        }
    }

    pub fn is_nondecreasing(&self) -> bool {
        match self {
            ConvexTestFunction::Exponential { t } => *t >= 0.0,
            ConvexTestFunction::ShiftedSquare { .. } => false,
            ConvexTestFunction::PositivePart => true,
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            ConvexTestFunction::Exponential { .. } => "exponential",
            ConvexTestFunction::ShiftedSquare { .. } => "shifted_square",
            ConvexTestFunction::PositivePart => "positive_part",
        }
    }
}

/// Monte Carlo estimate of P(statistic ≥ x) with exact and normal intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    pub statistic: StatisticKind,
    pub x: f64,
    pub hits: u64,
    pub reps: u64,
    pub p_hat: f64,
    /// Exact 95% Clopper–Pearson interval.
    pub ci95: (f64, f64),
    /// p̂ ± 3σ̂ normal interval, clamped to [0, 1].
    pub ci3sigma: (f64, f64),
    pub seed: u64,
}

/// Exact binomial (Clopper–Pearson) confidence interval at the given level.
pub fn clopper_pearson(hits: u64, reps: u64, level: f64) -> Result<(f64, f64)> {
    use statrs::distribution::{Beta, ContinuousCDF};
    if reps == 0 {
        return Err(Error::Domain("reps must be >= 1".into()));
    }
    if hits > reps {
        return Err(Error::Domain(format!("hits {hits} exceeds reps {reps}")));
    }
    if !(0.0 < level && level < 1.0) {
        return Err(Error::Domain(format!("level must be in (0, 1), got {level}")));
    }
    let tail = (1.0 - level) / 2.0;
    let k = hits as f64;
    let n = reps as f64;
    let lo = if hits == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0)
            .map_err(|e| Error::Domain(format!("beta quantile rejected: {e}")))?
            .inverse_cdf(tail)
    };
    let hi = if hits == reps {
        1.0
    } else {
        Beta::new(k + 1.0, n - k)
            .map_err(|e| Error::Domain(format!("beta quantile rejected: {e}")))?
            .inverse_cdf(1.0 - tail)
    };
    Ok((lo, hi))
}

/// Estimate P(statistic ≥ x) under the NA model.
pub fn estimate_tail(
    model: &NAModel,
    x: f64,
    reps: u64,
    master_seed: u64,
    statistic: StatisticKind,
) -> Result<TailEstimate> {
    if reps == 0 {
        return Err(Error::Domain("reps must be >= 1".into()));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("threshold x must be finite, got {x}")));
    }
    let prepared = PreparedModel::new(model)?;
    let indicators: Vec<u8> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let path = prepared.sample_na(master_seed, rep);
            u8::from(statistic.eval(&path) >= x)
        })
        .collect();
    let hits = indicators.iter().map(|&b| b as u64).sum::<u64>();
    let p_hat = hits as f64 / reps as f64;
    let sigma = (p_hat * (1.0 - p_hat) / reps as f64).sqrt();
    Ok(TailEstimate {
        statistic,
        x,
        hits,
        reps,
        p_hat,
        ci95: clopper_pearson(hits, reps, 0.95)?,
        ci3sigma: ((p_hat - 3.0 * sigma).max(0.0), (p_hat + 3.0 * sigma).min(1.0)),
        seed: master_seed,
    })
}

/// Result of a paired comparison E f(T_NA) vs E f(T_independent).
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub function: ConvexTestFunction,
    pub statistic: StatisticKind,
    pub lhs_hat: f64,
    pub rhs_hat: f64,
    /// Standard errors of the two means.
    pub lhs_sigma: f64,
    pub rhs_sigma: f64,
    /// Standard error of the paired mean difference lhs − rhs.
    pub diff_sigma: f64,
    /// (d̄ − 3σ̂_d, d̄ + 3σ̂_d) for the paired difference.
    pub paired_diff_ci: (f64, f64),
    /// lhs ≤ rhs within three standard errors of the paired difference.
    pub pass: bool,
    pub reps: u64,
    pub seed: u64,
}

/// Compare E f(statistic) under the NA law against the independent-marginals
/// law using common random numbers.
///
/// With `use_max` the statistic is the prefix-sum maximum and `f` must be
/// nondecreasing; otherwise it is the final sum and any convex `f` works.
pub fn convex_comparison(
    model: &NAModel,
    f: ConvexTestFunction,
    reps: u64,
    master_seed: u64,
    use_max: bool,
) -> Result<ComparisonReport> {
    if reps == 0 {
        return Err(Error::Domain("reps must be >= 1".into()));
    }
    if use_max && !f.is_nondecreasing() {
        return Err(Error::Domain(format!(
            "{} is not nondecreasing; the prefix-maximum comparison needs a \
             nondecreasing convex function",
            f.id()
        )));
    }
    let statistic = if use_max {
        StatisticKind::MaxPrefix
    } else {
        StatisticKind::FinalSum
    };
    let prepared = PreparedModel::new(model)?;
    let pairs: Vec<(f64, f64)> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let na = prepared.sample_na(master_seed, rep);
            let ind = prepared.sample_independent(master_seed, rep);
            (f.eval(statistic.eval(&na)), f.eval(statistic.eval(&ind)))
        })
        .collect();
    let mut sum_l = 0.0;
    let mut sum_r = 0.0;
    let mut sum_l2 = 0.0;
    let mut sum_r2 = 0.0;
    let mut sum_d = 0.0;
    let mut sum_d2 = 0.0;
    for &(l, r) in &pairs {
        if !l.is_finite() || !r.is_finite() {
            return Err(Error::Overflow(format!(
                "{} evaluated to a non-finite value; shrink its parameter",
                f.id()
            )));
        }
        let d = l - r;
        sum_l += l;
        sum_r += r;
        sum_l2 += l * l;
        sum_r2 += r * r;
        sum_d += d;
        sum_d2 += d * d;
    }
    let n = reps as f64;
    let lhs_hat = sum_l / n;
    let rhs_hat = sum_r / n;
    let var_l = (sum_l2 / n - lhs_hat * lhs_hat).max(0.0);
    let var_r = (sum_r2 / n - rhs_hat * rhs_hat).max(0.0);
    let d_hat = sum_d / n;
    let var_d = (sum_d2 / n - d_hat * d_hat).max(0.0);
    let diff_sigma = (var_d / n).sqrt();
    Ok(ComparisonReport {
        function: f,
        statistic,
        lhs_hat,
        rhs_hat,
        lhs_sigma: (var_l / n).sqrt(),
        rhs_sigma: (var_r / n).sqrt(),
        diff_sigma,
        paired_diff_ci: (d_hat - 3.0 * diff_sigma, d_hat + 3.0 * diff_sigma),
        pass: lhs_hat <= rhs_hat + 3.0 * diff_sigma,
        reps,
        seed: master_seed,
    })
}

/// Whether a bound value sits above the simulated tail.
#[derive(Debug, Clone, PartialEq)]
pub struct DominationVerdict {
    pub bound_id: &'static str,
    /// ci3sigma upper end of the estimate is at or below the raw bound value.
    pub dominated: bool,
    /// raw bound − p̂.
    pub margin: f64,
}

/// Check each bound against one tail estimate made at the same threshold.
pub fn domination_report(
    bounds: &[BoundResult<f64>],
    estimate: &TailEstimate,
) -> Result<Vec<DominationVerdict>> {
    bounds
        .iter()
        .map(|b| {
            let bx = b.input_value("x").ok_or_else(|| {
                Error::Mismatch(format!("bound {} records no threshold input", b.family.id()))
            })?;
            if (bx - estimate.x).abs() > 1e-12 * estimate.x.abs().max(1.0) {
                return Err(Error::Mismatch(format!(
                    "bound {} was computed at x = {bx} but the estimate is at x = {}",
                    b.family.id(),
                    estimate.x
                )));
            }
            Ok(DominationVerdict {
                bound_id: b.family.id(),
                dominated: estimate.ci3sigma.1 <= b.raw_value,
                margin: b.raw_value - estimate.p_hat,
            })
        })
        .collect()
}

/// The supermartingale whose α-th maximal moment is checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupermartingaleKind {
    /// M_k = exp(t·W_k − k t² σ² / 2) for a Gaussian walk W with step
    /// deviation σ; a positive martingale with M_0 = 1.
    ExponentialGaussianWalk { t: f64, sigma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupermartingaleSpec {
    pub kind: SupermartingaleKind,
    pub n: usize,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupermartingaleReport {
    pub spec: SupermartingaleSpec,
    /// Estimate of E (max_{0≤k≤n} M_k)^α.
    pub lhs_hat: f64,
    pub lhs_sigma: f64,
    /// (1 − α)⁻¹, the maximal-moment bound for supermartingales started at 1.
    pub rhs_exact: f64,
    /// lhs + 3σ̂ ≤ rhs.
    pub pass: bool,
    pub reps: u64,
    pub seed: u64,
}

/// Estimate E (max_k M_k)^α for the configured supermartingale and compare it
/// to the exact (1 − α)⁻¹ ceiling.
pub fn supermartingale_max_moment(
    spec: &SupermartingaleSpec,
    reps: u64,
    master_seed: u64,
) -> Result<SupermartingaleReport> {
    if reps == 0 {
        return Err(Error::Domain("reps must be >= 1".into()));
    }
    if !(0.0 < spec.alpha && spec.alpha < 1.0) {
        return Err(Error::Domain(format!(
            "alpha must be in (0, 1), got {}",
            spec.alpha
        )));
    }
    if spec.n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let SupermartingaleKind::ExponentialGaussianWalk { t, sigma } = spec.kind;
    if !t.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::Domain(format!(
            "need finite t and sigma > 0, got t = {t}, sigma = {sigma}"
        )));
    }
    let n_steps = spec.n;
    let alpha = spec.alpha;
    let samples: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            // Track the exponent max: max_k (t·W_k − k t² σ²/2), k = 0..=n,
            // which starts at 0 for the empty walk.
            let mut w = 0.0;
            let mut max_log = 0.0f64;
            for i in 0..n_steps {
                let z = CounterRng::new(master_seed, rep, i as u64).next_standard_normal();
                w += sigma * z;
                let log_m = t * w - (i + 1) as f64 * t * t * sigma * sigma / 2.0;
                if log_m > max_log {
                    max_log = log_m;
                }
            }
            (alpha * max_log).exp()
        })
        .collect();
    let n = reps as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if !mean.is_finite() {
        return Err(Error::Overflow(
            "maximal-moment sample mean is non-finite; reduce t".into(),
        ));
    }
    let var = (samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n).max(0.0);
    let lhs_sigma = (var / n).sqrt();
    let rhs_exact = 1.0 / (1.0 - alpha);
    Ok(SupermartingaleReport {
        spec: *spec,
        lhs_hat: mean,
        lhs_sigma,
        rhs_exact,
        pass: mean + 3.0 * lhs_sigma <= rhs_exact,
        reps,
        seed: master_seed,
    })
}

/// Key identifying one replicate's stream block (exposed for reporting).
pub fn replicate_seed(master_seed: u64, replicate: u64) -> u64 {
    replicate_key(master_seed, replicate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clopper_pearson_matches_reference_values() {
        let cases = [
            (3u64, 1000u64, (6.190_999_316_495_713_1e-4, 8.742_023_238_478_302_9e-3)),
            (0, 100_000, (0.0, 3.688_811_415_792_420_6e-5)),
            (250, 100_000, (2.199_999_496_427_87e-3, 2.829_410_059_873_396_3e-3)),
            (5, 2000, (8.122_259_751_939_095e-4, 5.824_445_334_518_517e-3)),
        ];
        for (hits, reps, (lo, hi)) in cases {
            let (got_lo, got_hi) = clopper_pearson(hits, reps, 0.95).unwrap();
            assert!((got_lo - lo).abs() <= 1e-9 * lo.max(1e-30), "lo {got_lo} vs {lo}");
            assert!((got_hi - hi).abs() <= 1e-9 * hi, "hi {got_hi} vs {hi}");
        }
    }

    #[test]
    fn tail_estimate_matches_an_exact_hypergeometric_probability() {
        // Draw 2 from {+1, +1, -1, -1}: P(S_2 >= 2) = 1/6.
        let model = NAModel::SamplingWithoutReplacement {
            population: vec![1.0, 1.0, -1.0, -1.0],
            n_draw: 2,
        };
        let est = estimate_tail(&model, 2.0, 40_000, 31, StatisticKind::FinalSum).unwrap();
        let exact = 1.0 / 6.0;
        assert!(
            est.ci95.0 <= exact && exact <= est.ci95.1,
            "CI {:?} misses {exact}",
            est.ci95
        );
        assert!(est.ci3sigma.0 <= exact && exact <= est.ci3sigma.1);
    }

    #[test]
    fn tail_estimates_replay_bit_for_bit() {
        let model = NAModel::MultinomialCounts {
            trials: 30,
            probs: vec![0.5, 0.25, 0.25],
        };
        let a = estimate_tail(&model, 3.0, 20_000, 9, StatisticKind::MaxPrefix).unwrap();
        let b = estimate_tail(&model, 3.0, 20_000, 9, StatisticKind::MaxPrefix).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn max_prefix_dominates_final_sum() {
        let model = NAModel::GaussianNegCov {
            covariance: vec![
                vec![1.0, -0.1, -0.1],
                vec![-0.1, 1.0, -0.1],
                vec![-0.1, -0.1, 1.0],
            ],
        };
        let x = 1.5;
        let max = estimate_tail(&model, x, 20_000, 5, StatisticKind::MaxPrefix).unwrap();
        let fin = estimate_tail(&model, x, 20_000, 5, StatisticKind::FinalSum).unwrap();
        assert!(max.p_hat >= fin.p_hat);
    }

    #[test]
    fn convex_comparison_passes_for_an_increasing_exponential() {
        let model = NAModel::MultinomialCounts {
            trials: 40,
            probs: vec![0.4, 0.3, 0.2, 0.1],
        };
        for use_max in [false, true] {
            let rep = convex_comparison(
                &model,
                ConvexTestFunction::Exponential { t: 0.2 },
                30_000,
                17,
                use_max,
            )
            .unwrap();
            assert!(rep.pass, "use_max = {use_max}: {rep:?}");
        }
    }

    #[test]
    fn prefix_maximum_comparison_rejects_non_monotone_functions() {
        let model = NAModel::MultinomialCounts {
            trials: 10,
            probs: vec![0.5, 0.5],
        };
        let err = convex_comparison(
            &model,
            ConvexTestFunction::ShiftedSquare { a: 0.0 },
            100,
            1,
            true,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn overflowing_test_functions_are_reported() {
        let model = NAModel::GaussianNegCov {
            covariance: vec![vec![1.0, -0.5], vec![-0.5, 1.0]],
        };
        let err = convex_comparison(
            &model,
            ConvexTestFunction::Exponential { t: 500.0 },
            2000,
            2,
            false,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Overflow(_)));
    }

    #[test]
    fn domination_report_requires_matching_thresholds() {
        use crate::bounds::{rio_tail_bound, BoundedRangeSpec, RioForm};
        let range = BoundedRangeSpec::uniform(4, -1.0, 1.0).unwrap();
        let model = NAModel::SamplingWithoutReplacement {
            population: vec![1.0, 1.0, -1.0, -1.0],
            n_draw: 2,
        };
        let est = estimate_tail(&model, 2.0, 5000, 3, StatisticKind::FinalSum).unwrap();
        let good = rio_tail_bound(2.0, 0.5, &range, RioForm::HoeffdingAzuma).unwrap();
        let verdicts = domination_report(std::slice::from_ref(&good), &est).unwrap();
        assert_eq!(verdicts.len(), 1);
        assert_eq!(verdicts[0].bound_id, "hoeffding_azuma");
        let bad = rio_tail_bound(3.0, 0.5, &range, RioForm::HoeffdingAzuma).unwrap();
        assert!(matches!(
            domination_report(&[bad], &est),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn supermartingale_alpha_moment_stays_below_its_ceiling() {
        let spec = SupermartingaleSpec {
            kind: SupermartingaleKind::ExponentialGaussianWalk { t: 0.5, sigma: 1.0 },
            n: 20,
            alpha: 0.5,
        };
        let rep = supermartingale_max_moment(&spec, 20_000, 44).unwrap();
        assert_eq!(rep.rhs_exact, 2.0);
        assert!(rep.lhs_hat >= 1.0, "maximum includes the start, so lhs >= 1");
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn parameter_validation_rejects_bad_requests() {
        let model = NAModel::MultinomialCounts {
            trials: 4,
            probs: vec![0.5, 0.5],
        };
        assert!(estimate_tail(&model, 1.0, 0, 1, StatisticKind::FinalSum).is_err());
        assert!(estimate_tail(&model, f64::NAN, 10, 1, StatisticKind::FinalSum).is_err());
        let spec = SupermartingaleSpec {
            kind: SupermartingaleKind::ExponentialGaussianWalk { t: 0.5, sigma: 1.0 },
            n: 10,
            alpha: 1.0,
        };
        assert!(supermartingale_max_moment(&spec, 100, 1).is_err());
    }
}
