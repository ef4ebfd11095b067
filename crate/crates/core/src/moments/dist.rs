//! Marginal laws the bounds consume, with every moment functional the bound
//! inputs are built from.

use statrs::distribution::{ContinuousCDF, Normal};

use super::quadrature::{adaptive_simpson, integrate_left_tail, integrate_right_tail};
use crate::error::{Error, Result};

const QUAD_REL_TOL: f64 = 1e-12;

/// Supported marginal laws.
#[derive(Debug, Clone, PartialEq)]
pub enum DistKind {
    /// Finitely many atoms, given as (value, probability) pairs.
    BoundedDiscrete { support: Vec<(f64, f64)> },
    /// Uniform law on [a, b].
    Uniform { a: f64, b: f64 },
    /// N(0, σ²).
    CenteredGaussian { sigma: f64 },
    /// N(0, σ²) conditioned on |X| ≤ cut.
    TruncatedCenteredGaussian { sigma: f64, cut: f64 },
    /// A value drawn uniformly from a fixed finite population.
    FinitePopulationValue { population: Vec<f64> },
}

/// A validated marginal law plus the claim that it is mean-zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec {
    kind: DistKind,
    centered: bool,
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("standard normal parameters are valid")
}

impl DistributionSpec {
    pub fn new(kind: DistKind, centered: bool) -> Result<Self> {
        match &kind {
            DistKind::BoundedDiscrete { support } => {
                if support.is_empty() {
                    return Err(Error::Domain("discrete law needs at least one atom".into()));
                }
                let mut total = 0.0;
                for &(v, p) in support {
                    if !v.is_finite() || !p.is_finite() || p < 0.0 {
                        return Err(Error::Domain(format!("bad atom ({v}, {p})")));
                    }
                    total += p;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::Domain(format!(
                        "atom probabilities sum to {total}, not 1"
                    )));
                }
            }
            DistKind::Uniform { a, b } => {
                if !a.is_finite() || !b.is_finite() || a >= b {
                    return Err(Error::Domain(format!("uniform needs a < b, got [{a}, {b}]")));
                }
            }
            DistKind::CenteredGaussian { sigma } => {
                if !(sigma.is_finite() && *sigma > 0.0) {
                    return Err(Error::Domain(format!("gaussian needs sigma > 0, got {sigma}")));
                }
            }
            DistKind::TruncatedCenteredGaussian { sigma, cut } => {
                if !(sigma.is_finite() && *sigma > 0.0) {
                    return Err(Error::Domain(format!("gaussian needs sigma > 0, got {sigma}")));
                }
                if !(cut.is_finite() && *cut > 0.0) {
                    return Err(Error::Domain(format!("truncation needs cut > 0, got {cut}")));
                }
            }
            DistKind::FinitePopulationValue { population } => {
                if population.is_empty() {
                    return Err(Error::Domain("population must be nonempty".into()));
                }
                if population.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Domain("population values must be finite".into()));
                }
            }
        }
        let spec = DistributionSpec { kind, centered };
        if centered {
            let mean = spec.mean();
            let tol = 1e-12 * spec.scale().max(1.0);
            if mean.abs() > tol {
                return Err(Error::Domain(format!(
                    "law declared centered but has mean {mean}"
                )));
            }
        }
        Ok(spec)
    }

    pub fn kind(&self) -> &DistKind {
        &self.kind
    }

    pub fn centered(&self) -> bool {
        self.centered
    }

    /// A characteristic magnitude used to seed search grids and quadrature
    /// windows.
    fn scale(&self) -> f64 {
        match &self.kind {
            DistKind::BoundedDiscrete { support } => support
                .iter()
                .map(|(v, _)| v.abs())
                .fold(0.0, f64::max)
                .max(1e-12),
            DistKind::Uniform { a, b } => a.abs().max(b.abs()).max(1e-12),
            DistKind::CenteredGaussian { sigma } => *sigma,
            DistKind::TruncatedCenteredGaussian { sigma, cut } => sigma.max(*cut),
            DistKind::FinitePopulationValue { population } => population
                .iter()
                .map(|v| v.abs())
                .fold(0.0, f64::max)
                .max(1e-12),
        }
    }

    pub fn mean(&self) -> f64 {
        match &self.kind {
            DistKind::BoundedDiscrete { support } => {
                support.iter().map(|(v, p)| v * p).sum()
            }
            DistKind::Uniform { a, b } => 0.5 * (a + b),
            DistKind::CenteredGaussian { .. } => 0.0,
            DistKind::TruncatedCenteredGaussian { .. } => 0.0,
            DistKind::FinitePopulationValue { population } => {
                population.iter().sum::<f64>() / population.len() as f64
            }
        }
    }

    pub fn second_moment(&self) -> f64 {
        self.kth_moment(2)
    }

    /// Signed k-th moment E Xᵏ.
    pub fn kth_moment(&self, k: u32) -> f64 {
        match &self.kind {
            DistKind::BoundedDiscrete { support } => {
                support.iter().map(|(v, p)| v.powi(k as i32) * p).sum()
            }
            DistKind::Uniform { a, b } => {
                let kk = k as i32;
                (b.powi(kk + 1) - a.powi(kk + 1)) / ((k as f64 + 1.0) * (b - a))
            }
            DistKind::CenteredGaussian { sigma } => {
                if k % 2 == 1 {
                    0.0
                } else {
                    let mut double_factorial = 1.0;
                    let mut j = k as i64 - 1;
                    while j > 1 {
                        double_factorial *= j as f64;
                        j -= 2;
                    }
                    double_factorial * sigma.powi(k as i32)
                }
            }
            DistKind::TruncatedCenteredGaussian { sigma, cut } => {
                if k % 2 == 1 {
                    0.0
                } else {
                    let z = self.truncation_mass(*sigma, *cut);
                    let f = |x: f64| x.powi(k as i32) * phi(x / sigma) / sigma;
                    2.0 * adaptive_simpson(&f, 0.0, *cut, QUAD_REL_TOL) / z
                }
            }
            DistKind::FinitePopulationValue { population } => {
                population.iter().map(|v| v.powi(k as i32)).sum::<f64>() / population.len() as f64
            }
        }
    }

    fn truncation_mass(&self, sigma: f64, cut: f64) -> f64 {
        2.0 * std_normal().cdf(cut / sigma) - 1.0
    }

    /// E |X|ᵖ for real p > 0.
    pub fn abs_moment(&self, p: f64) -> Result<f64> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::Domain(format!("abs_moment needs p > 0, got {p}")));
        }
        Ok(match &self.kind {
            DistKind::BoundedDiscrete { support } => {
                support.iter().map(|(v, pr)| v.abs().powf(p) * pr).sum()
            }
            DistKind::Uniform { a, b } => {
                let g = |u: f64| u.signum() * u.abs().powf(p + 1.0) / (p + 1.0);
                (g(*b) - g(*a)) / (b - a)
            }
            DistKind::CenteredGaussian { sigma } => {
                let f = |x: f64| x.powf(p) * phi(x / sigma) / sigma;
                2.0 * integrate_right_tail(&f, 0.0, *sigma)
            }
            DistKind::TruncatedCenteredGaussian { sigma, cut } => {
                let z = self.truncation_mass(*sigma, *cut);
                let f = |x: f64| x.powf(p) * phi(x / sigma) / sigma;
                2.0 * adaptive_simpson(&f, 0.0, *cut, QUAD_REL_TOL) / z
            }
            DistKind::FinitePopulationValue { population } => {
                population.iter().map(|v| v.abs().powf(p)).sum::<f64>() / population.len() as f64
            }
        })
    }

    /// One-sided truncated second moment E[X² 1{X ≤ y}], inclusive at y.
    pub fn truncated_second_moment(&self, y: f64) -> Result<f64> {
        if y.is_nan() {
            return Err(Error::Domain("truncation level must not be NaN".into()));
        }
        Ok(match &self.kind {
            DistKind::BoundedDiscrete { support } => support
                .iter()
                .filter(|(v, _)| *v <= y)
                .map(|(v, p)| v * v * p)
                .sum(),
            DistKind::Uniform { a, b } => {
                if y < *a {
                    0.0
                } else if y >= *b {
                    self.second_moment()
                } else {
                    (y.powi(3) - a.powi(3)) / (3.0 * (b - a))
                }
            }
            DistKind::CenteredGaussian { sigma } => {
                let f = |x: f64| x * x * phi(x / sigma) / sigma;
                if y <= 0.0 {
                    integrate_left_tail(&f, y, *sigma)
                } else {
                    sigma * sigma - integrate_right_tail(&f, y, *sigma)
                }
            }
            DistKind::TruncatedCenteredGaussian { sigma, cut } => {
                if y <= -cut {
                    0.0
                } else if y >= *cut {
                    self.second_moment()
                } else {
                    let z = self.truncation_mass(*sigma, *cut);
                    let f = |x: f64| x * x * phi(x / sigma) / sigma;
                    adaptive_simpson(&f, -cut, y, QUAD_REL_TOL) / z
                }
            }
            DistKind::FinitePopulationValue { population } => {
                population
                    .iter()
                    .filter(|v| **v <= y)
                    .map(|v| v * v)
                    .sum::<f64>()
                    / population.len() as f64
            }
        })
    }

    /// P(X > x), strict.
    pub fn survival(&self, x: f64) -> f64 {
        match &self.kind {
            DistKind::BoundedDiscrete { support } => {
                support.iter().filter(|(v, _)| *v > x).map(|(_, p)| p).sum()
            }
            DistKind::Uniform { a, b } => ((b - x) / (b - a)).clamp(0.0, 1.0),
            DistKind::CenteredGaussian { sigma } => std_normal().sf(x / sigma),
            DistKind::TruncatedCenteredGaussian { sigma, cut } => {
                if x >= *cut {
                    0.0
                } else if x < -cut {
                    1.0
                } else {
                    let n = std_normal();
                    (n.cdf(cut / sigma) - n.cdf(x / sigma)) / self.truncation_mass(*sigma, *cut)
                }
            }
            DistKind::FinitePopulationValue { population } => {
                population.iter().filter(|v| **v > x).count() as f64 / population.len() as f64
            }
        }
    }

    /// P(|X| > x) for x ≥ 0, strict.
    pub fn abs_survival(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        match &self.kind {
            DistKind::BoundedDiscrete { support } => support
                .iter()
                .filter(|(v, _)| v.abs() > x)
                .map(|(_, p)| p)
                .sum(),
            DistKind::Uniform { a, b } => {
                let inside = (b.min(x) - a.max(-x)).max(0.0) / (b - a);
                (1.0 - inside).clamp(0.0, 1.0)
            }
            DistKind::CenteredGaussian { sigma } => 2.0 * std_normal().sf(x / sigma),
            DistKind::TruncatedCenteredGaussian { sigma, cut } => {
                if x >= *cut {
                    0.0
                } else {
                    let n = std_normal();
                    2.0 * (n.cdf(cut / sigma) - n.cdf(x / sigma))
                        / self.truncation_mass(*sigma, *cut)
                }
            }
            DistKind::FinitePopulationValue { population } => {
                population.iter().filter(|v| v.abs() > x).count() as f64
                    / population.len() as f64
            }
        }
    }

    /// P(|X| ≥ x), the left limit that atoms contribute to the weak norm.
    fn abs_survival_inclusive(&self, x: f64) -> f64 {
        match &self.kind {
            DistKind::BoundedDiscrete { support } => support
                .iter()
                .filter(|(v, _)| v.abs() >= x)
                .map(|(_, p)| p)
                .sum(),
            DistKind::FinitePopulationValue { population } => {
                population.iter().filter(|v| v.abs() >= x).count() as f64
                    / population.len() as f64
            }
            _ => self.abs_survival(x),
        }
    }

    /// Weak p-th norm sup_{x>0} xᵖ P(|X| ≥ x), exact for atomic laws and
    /// grid-plus-golden for continuous ones.
    pub fn weak_norm_p(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::Domain(format!("weak norm needs p >= 1, got {p}")));
        }
        match &self.kind {
            DistKind::BoundedDiscrete { .. } | DistKind::FinitePopulationValue { .. } => {
                let atoms: Vec<f64> = match &self.kind {
                    DistKind::BoundedDiscrete { support } => {
                        support.iter().map(|(v, _)| v.abs()).collect()
                    }
                    DistKind::FinitePopulationValue { population } => {
                        population.iter().map(|v| v.abs()).collect()
                    }
                    _ => unreachable!(),
                };
                let mut best = 0.0f64;
                for &m in &atoms {
                    if m > 0.0 {
                        best = best.max(m.powf(p) * self.abs_survival_inclusive(m));
                    }
                }
                Ok(best)
            }
            _ => {
                const GRID: usize = 4096;
                let s = self.scale();
                let lo = (1e-6 * s).ln();
                let hi = (1e3 * s).ln();
                let step = (hi - lo) / (GRID - 1) as f64;
                let value = |x: f64| x.powf(p) * self.abs_survival_inclusive(x);
                let mut best_i = 0usize;
                let mut best_v = f64::MIN;
                for i in 0..GRID {
                    let v = value((lo + step * i as f64).exp());
                    if v > best_v {
                        best_i = i;
                        best_v = v;
                    }
                }
                if best_i == GRID - 1 {
                    return Err(Error::Divergence(
                        "weak norm still increasing at the top of the search grid".into(),
                    ));
                }
                let blo = (lo + step * best_i.saturating_sub(1) as f64).exp();
                let bhi = (lo + step * (best_i + 1) as f64).exp();
                let ratio = 0.618_033_988_749_894_9;
                let (mut l, mut h) = (blo, bhi);
                let mut t1 = h - ratio * (h - l);
                let mut t2 = l + ratio * (h - l);
                let mut f1 = value(t1);
                let mut f2 = value(t2);
                for _ in 0..120 {
                    if h - l <= 1e-12 * h.max(1.0) {
                        break;
                    }
                    if f1 >= f2 {
                        h = t2;
                        t2 = t1;
                        f2 = f1;
                        t1 = h - ratio * (h - l);
                        f1 = value(t1);
                    } else {
                        l = t1;
                        t1 = t2;
                        f1 = f2;
                        t2 = l + ratio * (h - l);
                        f2 = value(t2);
                    }
                }
                Ok(value(0.5 * (l + h)))
            }
        }
    }

    /// E[X² e^{|X|ᵖ}] for p ∈ (0, 1), the semi-exponential normalization.
    pub fn semi_exp_second_moment(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!(
                "semi-exponential moment needs p in (0, 1), got {p}"
            )));
        }
        let weight = |x: f64| x * x * x.abs().powf(p).exp();
        Ok(match &self.kind {
            DistKind::BoundedDiscrete { support } => {
                support.iter().map(|(v, pr)| weight(*v) * pr).sum()
            }
            DistKind::Uniform { a, b } => {
                adaptive_simpson(&|x| weight(x) / (b - a), *a, *b, QUAD_REL_TOL)
            }
            DistKind::CenteredGaussian { sigma } => {
                let f = |x: f64| weight(x) * phi(x / sigma) / sigma;
                2.0 * integrate_right_tail(&f, 0.0, *sigma)
            }
            DistKind::TruncatedCenteredGaussian { sigma, cut } => {
                let z = self.truncation_mass(*sigma, *cut);
                let f = |x: f64| weight(x) * phi(x / sigma) / sigma;
                2.0 * adaptive_simpson(&f, 0.0, *cut, QUAD_REL_TOL) / z
            }
            DistKind::FinitePopulationValue { population } => {
                population.iter().map(|v| weight(*v)).sum::<f64>() / population.len() as f64
            }
        })
    }

    /// E e^{a|X|ᵖ}. Returns None when the integral diverges (or exceeds the
    /// range of f64, which is operationally the same for the caller).
    pub fn exp_abs_moment(&self, a: f64, p: f64) -> Result<Option<f64>> {
        if !(a > 0.0) || !a.is_finite() || !(p > 0.0) || !p.is_finite() {
            return Err(Error::Domain(format!(
                "exponential moment needs a > 0 and p > 0, got a = {a}, p = {p}"
            )));
        }
        let weight = |x: f64| (a * x.abs().powf(p)).exp();
        let value = match &self.kind {
            DistKind::BoundedDiscrete { support } => {
                support.iter().map(|(v, pr)| weight(*v) * pr).sum()
            }
            DistKind::Uniform { a: lo, b: hi } => {
                adaptive_simpson(&|x| weight(x) / (hi - lo), *lo, *hi, QUAD_REL_TOL)
            }
            DistKind::CenteredGaussian { sigma } => {
                if p > 2.0 || (p == 2.0 && a >= 0.5 / (sigma * sigma)) {
                    return Ok(None);
                }
                // Combine both exponents before exponentiating: the naive
                // weight(x) * phi(x) product evaluates as inf * 0 = NaN once
                // a|x|^p alone overflows, even though the product is tiny.
                let norm = sigma * (2.0 * std::f64::consts::PI).sqrt();
                let f = move |x: f64| {
                    (a * x.abs().powf(p) - 0.5 * x * x / (sigma * sigma)).exp() / norm
                };
                2.0 * integrate_right_tail(&f, 0.0, *sigma)
            }
            DistKind::TruncatedCenteredGaussian { sigma, cut } => {
                let z = self.truncation_mass(*sigma, *cut);
                let norm = sigma * (2.0 * std::f64::consts::PI).sqrt();
                let f = move |x: f64| {
                    (a * x.abs().powf(p) - 0.5 * x * x / (sigma * sigma)).exp() / norm
                };
                2.0 * adaptive_simpson(&f, 0.0, *cut, QUAD_REL_TOL) / z
            }
            DistKind::FinitePopulationValue { population } => {
                population.iter().map(|v| weight(*v)).sum::<f64>() / population.len() as f64
            }
        };
        Ok(value.is_finite().then_some(value))
    }

    /// Essential range (inf, sup), None when unbounded.
    pub fn range(&self) -> Option<(f64, f64)> {
        match &self.kind {
            DistKind::BoundedDiscrete { support } => {
                let lo = support.iter().map(|(v, _)| *v).fold(f64::INFINITY, f64::min);
                let hi = support
                    .iter()
                    .map(|(v, _)| *v)
                    .fold(f64::NEG_INFINITY, f64::max);
                Some((lo, hi))
            }
            DistKind::Uniform { a, b } => Some((*a, *b)),
            DistKind::CenteredGaussian { .. } => None,
            DistKind::TruncatedCenteredGaussian { cut, .. } => Some((-cut, *cut)),
            DistKind::FinitePopulationValue { population } => {
                let lo = population.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = population.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Some((lo, hi))
            }
        }
    }
}

fn phi(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Rademacher ±1 law, the workhorse test marginal.
pub fn rademacher() -> DistributionSpec {
    DistributionSpec::new(
        DistKind::BoundedDiscrete {
            support: vec![(-1.0, 0.5), (1.0, 0.5)],
        },
        true,
    )
    .expect("rademacher is a valid centered law")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    fn gaussian(sigma: f64) -> DistributionSpec {
        DistributionSpec::new(DistKind::CenteredGaussian { sigma }, true).unwrap()
    }

    fn uniform_pm1() -> DistributionSpec {
        DistributionSpec::new(DistKind::Uniform { a: -1.0, b: 1.0 }, true).unwrap()
    }

    #[test]
    fn validation_rejects_malformed_laws() {
        assert!(DistributionSpec::new(
            DistKind::BoundedDiscrete { support: vec![(-1.0, 0.6), (1.0, 0.6)] },
            false
        )
        .is_err());
        assert!(DistributionSpec::new(DistKind::Uniform { a: 1.0, b: 1.0 }, false).is_err());
        assert!(DistributionSpec::new(DistKind::CenteredGaussian { sigma: 0.0 }, true).is_err());
        assert!(DistributionSpec::new(
            DistKind::FinitePopulationValue { population: vec![] },
            false
        )
        .is_err());
        assert!(DistributionSpec::new(DistKind::Uniform { a: 0.0, b: 1.0 }, true).is_err());
    }

    #[test]
    fn truncated_second_moment_of_atoms_is_exact() {
        let r = rademacher();
        assert_eq!(r.truncated_second_moment(2.0).unwrap(), 1.0);
        assert_eq!(r.truncated_second_moment(0.5).unwrap(), 0.5);
        assert_eq!(r.truncated_second_moment(-2.0).unwrap(), 0.0);
        assert_eq!(r.truncated_second_moment(1.0).unwrap(), 1.0);
    }

    #[test]
    fn truncated_second_moment_matches_gaussian_closed_form() {
        let g = gaussian(1.0);
        let got = g.truncated_second_moment(1.0).unwrap();
        assert!(rel(got, 0.599_374_021_549_399_6) <= 1e-10);
        let n = std_normal();
        for &y in &[-1.5, -0.3, 0.0, 0.7, 2.2] {
            let want = n.cdf(y) - y * phi(y);
            assert!(rel(g.truncated_second_moment(y).unwrap(), want) <= 1e-10, "y={y}");
        }
    }

    #[test]
    fn truncated_second_moment_is_monotone_and_saturates() {
        let g = gaussian(2.0);
        let mut prev = 0.0;
        for i in -40..=40 {
            let y = 0.25 * i as f64;
            let v = g.truncated_second_moment(y).unwrap();
            assert!(v >= prev - 1e-12, "decreased at y={y}");
            prev = v;
        }
        let full = g.truncated_second_moment(1e6 * 2.0).unwrap();
        assert!((full - 4.0).abs() <= 1e-9);
    }

    #[test]
    fn truncated_second_moment_uniform_and_truncated_gaussian() {
        let u = uniform_pm1();
        assert!(rel(u.truncated_second_moment(0.5).unwrap(), 0.1875) <= 1e-14);
        assert!(rel(u.truncated_second_moment(2.0).unwrap(), 1.0 / 3.0) <= 1e-14);

        let t = DistributionSpec::new(
            DistKind::TruncatedCenteredGaussian { sigma: 1.0, cut: 2.0 },
            true,
        )
        .unwrap();
        assert!(rel(t.second_moment(), 0.773_741_303_549_923_25) <= 1e-8);
        assert!(rel(t.truncated_second_moment(1.0).unwrap(), 0.490_981_756_043_102_94) <= 1e-8);
    }

    #[test]
    fn weak_norm_reference_values() {
        assert_eq!(rademacher().weak_norm_p(2.0).unwrap(), 1.0);
        assert_eq!(rademacher().weak_norm_p(3.5).unwrap(), 1.0);

        let u = uniform_pm1();
        assert!(rel(u.weak_norm_p(2.0).unwrap(), 4.0 / 27.0) <= 1e-10);

        let g = gaussian(1.0);
        assert!(rel(g.weak_norm_p(2.0).unwrap(), 0.331_433_229_557_702_81) <= 1e-8);
        assert!(rel(g.weak_norm_p(4.0).unwrap(), 0.754_475_556_095_862_98) <= 1e-8);
    }

    #[test]
    fn weak_norm_never_exceeds_the_strong_moment() {
        let laws = [rademacher(), uniform_pm1(), gaussian(1.3)];
        for law in &laws {
            for &p in &[1.0, 2.0, 2.5, 4.0] {
                let weak = law.weak_norm_p(p).unwrap();
                let strong = law.abs_moment(p).unwrap();
                assert!(weak <= strong * (1.0 + 1e-10), "p={p}: {weak} > {strong}");
            }
        }
    }

    #[test]
    fn abs_moment_reference_values() {
        let g = gaussian(1.0);
        assert!(rel(g.abs_moment(2.5).unwrap(), 1.233_268_437_993_687_8) <= 1e-9);
        assert!(rel(g.abs_moment(2.0).unwrap(), 1.0) <= 1e-10);
        let u = uniform_pm1();
        assert!(rel(u.abs_moment(2.5).unwrap(), 2.0 / 7.0) <= 1e-14);
    }

    #[test]
    fn semi_exp_moment_reference_values() {
        let g = gaussian(1.0);
        assert!(rel(g.semi_exp_second_moment(0.5).unwrap(), 3.561_708_266_455_380_9) <= 1e-8);
        let u = uniform_pm1();
        assert!(rel(u.semi_exp_second_moment(0.5).unwrap(), 0.791_199_095_764_132_23) <= 1e-9);
        assert!(rel(rademacher().semi_exp_second_moment(0.5).unwrap(), 1f64.exp()) <= 1e-14);
    }

    #[test]
    fn exp_moment_divergence_rules() {
        let g = gaussian(1.0);
        assert!(g.exp_abs_moment(0.5, 2.5).unwrap().is_none());
        assert!(g.exp_abs_moment(0.5, 2.0).unwrap().is_none());
        let finite = g.exp_abs_moment(0.49, 2.0).unwrap().unwrap();
        assert!(rel(finite, (1.0f64 - 0.98).powf(-0.5)) <= 1e-8);
        let gentler = g.exp_abs_moment(0.5, 1.5).unwrap().unwrap();
        assert!(rel(gentler, 1.785_728_001_107_893_9) <= 1e-8);
        let t = DistributionSpec::new(
            DistKind::TruncatedCenteredGaussian { sigma: 1.0, cut: 2.0 },
            true,
        )
        .unwrap();
        assert!(t.exp_abs_moment(0.5, 3.0).unwrap().is_some());
    }

    #[test]
    fn survival_functions_are_consistent() {
        let u = uniform_pm1();
        assert!(rel(u.survival(0.5), 0.25) <= 1e-15);
        assert!(rel(u.abs_survival(0.5), 0.5) <= 1e-15);
        assert_eq!(u.abs_survival(1.5), 0.0);

        let r = rademacher();
        assert_eq!(r.survival(0.0), 0.5);
        assert_eq!(r.survival(1.0), 0.0);
        assert_eq!(r.abs_survival(0.999), 1.0);

        let g = gaussian(2.0);
        assert!(rel(g.survival(0.0), 0.5) <= 1e-12);
        assert!(rel(g.abs_survival(2.0), 2.0 * std_normal().sf(1.0)) <= 1e-12);
    }

    #[test]
    fn gaussian_even_moments_use_double_factorials() {
        let g = gaussian(1.5);
        assert_eq!(g.kth_moment(1), 0.0);
        assert!(rel(g.kth_moment(2), 2.25) <= 1e-15);
        assert!(rel(g.kth_moment(4), 3.0 * 1.5f64.powi(4)) <= 1e-15);
        assert!(rel(g.kth_moment(6), 15.0 * 1.5f64.powi(6)) <= 1e-15);
    }

    #[test]
    fn ranges_reflect_support() {
        assert_eq!(rademacher().range(), Some((-1.0, 1.0)));
        assert_eq!(uniform_pm1().range(), Some((-1.0, 1.0)));
        assert_eq!(gaussian(1.0).range(), None);
        let t = DistributionSpec::new(
            DistKind::TruncatedCenteredGaussian { sigma: 1.0, cut: 2.5 },
            true,
        )
        .unwrap();
        assert_eq!(t.range(), Some((-2.5, 2.5)));
    }
}
