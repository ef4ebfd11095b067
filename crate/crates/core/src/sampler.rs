//! Exact samplers for three negatively associated models, each paired with
//! an independent-marginals shadow sampler driven by the same streams.

use crate::error::{Error, Result};
use crate::moments::{DistKind, DistributionSpec};
use crate::rng::{replicate_key, CounterRng};

/// A joint law whose coordinates are negatively associated.
#[derive(Debug, Clone, PartialEq)]
pub enum NAModel {
    /// n_draw values sampled without replacement from a finite population,
    /// centered by the population mean.
    SamplingWithoutReplacement {
        population: Vec<f64>,
        n_draw: usize,
    },
    /// Centered multinomial counts: coordinate j is count_j − trials·p_j.
    MultinomialCounts { trials: u64, probs: Vec<f64> },
    /// A centered Gaussian vector with nonpositive off-diagonal covariances.
    GaussianNegCov { covariance: Vec<Vec<f64>> },
}

/// One simulated trajectory of partial sums.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub values: Vec<f64>,
    /// prefix_sums[k] = values[0] + … + values[k].
    pub prefix_sums: Vec<f64>,
    /// max over k of prefix_sums[k].
    pub running_max: f64,
    /// Key identifying the (master seed, replicate) pair that produced this
    /// path.
    pub seed: u64,
}

impl NAModel {
    /// Number of summands a path will contain.
    pub fn n(&self) -> usize {
        match self {
            NAModel::SamplingWithoutReplacement { n_draw, .. } => *n_draw,
            NAModel::MultinomialCounts { probs, .. } => probs.len(),
            NAModel::GaussianNegCov { covariance } => covariance.len(),
        }
    }

    /// Stable identifier used in CSV output.
    pub fn id(&self) -> &'static str {
        match self {
            NAModel::SamplingWithoutReplacement { .. } => "sampling_without_replacement",
            NAModel::MultinomialCounts { .. } => "multinomial_counts",
            NAModel::GaussianNegCov { .. } => "gaussian_neg_cov",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            NAModel::SamplingWithoutReplacement { population, n_draw } => {
                if population.is_empty() {
                    return Err(Error::Domain("population must be nonempty".into()));
                }
                if population.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Domain("population values must be finite".into()));
                }
                if *n_draw == 0 || *n_draw > population.len() {
                    return Err(Error::Domain(format!(
                        "n_draw must be in 1..={}, got {n_draw}",
                        population.len()
                    )));
                }
                Ok(())
            }
            NAModel::MultinomialCounts { trials, probs } => {
                if *trials == 0 {
                    return Err(Error::Domain("trials must be >= 1".into()));
                }
                if probs.len() < 2 {
                    return Err(Error::Domain("need at least two categories".into()));
                }
                let mut total = 0.0;
                for &p in probs {
                    if !(0.0..=1.0).contains(&p) {
                        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
                    }
                    total += p;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::Domain(format!(
                        "category probabilities sum to {total}, not 1"
                    )));
                }
                Ok(())
            }
            NAModel::GaussianNegCov { covariance } => {
                let n = covariance.len();
                if n == 0 {
                    return Err(Error::Domain("covariance must be nonempty".into()));
                }
                for (i, row) in covariance.iter().enumerate() {
                    if row.len() != n {
                        return Err(Error::Domain(format!(
                            "covariance row {i} has length {}, expected {n}",
                            row.len()
                        )));
                    }
                    if !(row[i] > 0.0) || !row[i].is_finite() {
                        return Err(Error::Domain(format!(
                            "diagonal entry {i} must be finite and > 0, got {}",
                            row[i]
                        )));
                    }
                }
                for i in 0..n {
                    for j in 0..i {
                        let scale = (covariance[i][i] * covariance[j][j]).sqrt();
                        if (covariance[i][j] - covariance[j][i]).abs() > 1e-12 * scale {
                            return Err(Error::Domain(format!(
                                "covariance is not symmetric at ({i}, {j})"
                            )));
                        }
                        if covariance[i][j] > 1e-12 * scale {
                            return Err(Error::Domain(format!(
                                "off-diagonal covariance at ({i}, {j}) is positive; \
                                 coordinates would not be negatively associated"
                            )));
                        }
                    }
                }
                cholesky(covariance).map(|_| ())
            }
        }
    }

    /// The common marginal law of each coordinate.
    ///
    /// These are what the moments layer needs to derive bound inputs when no
    /// explicit marginal list is configured.
    pub fn marginals(&self) -> Result<Vec<DistributionSpec>> {
        self.validate()?;
        match self {
            NAModel::SamplingWithoutReplacement { population, n_draw } => {
                let centered = centered_population(population);
                let law = DistributionSpec::new(
                    DistKind::FinitePopulationValue {
                        population: centered,
                    },
                    true,
                )?;
                Ok(vec![law; *n_draw])
            }
            NAModel::MultinomialCounts { trials, probs } => {
                use statrs::distribution::{Binomial, Discrete};
                probs
                    .iter()
                    .map(|&p| {
                        let bin = Binomial::new(p, *trials).map_err(|e| {
                            Error::Domain(format!("binomial marginal rejected: {e}"))
                        })?;
                        let shift = *trials as f64 * p;
                        let mut support: Vec<(f64, f64)> = (0..=*trials)
                            .map(|k| (k as f64 - shift, bin.pmf(k)))
                            .collect();
                        let total: f64 = support.iter().map(|(_, q)| q).sum();
                        for (_, q) in &mut support {
                            *q /= total;
                        }
                        DistributionSpec::new(DistKind::BoundedDiscrete { support }, true)
                    })
                    .collect()
            }
            NAModel::GaussianNegCov { covariance } => (0..covariance.len())
                .map(|i| {
                    DistributionSpec::new(
                        DistKind::CenteredGaussian {
                            sigma: covariance[i][i].sqrt(),
                        },
                        true,
                    )
                })
                .collect(),
        }
    }
}

fn centered_population(population: &[f64]) -> Vec<f64> {
    let mean = population.iter().sum::<f64>() / population.len() as f64;
    population.iter().map(|v| v - mean).collect()
}

/// Lower-triangular Cholesky factor; fails on matrices that are not
/// (numerically) positive definite.
fn cholesky(cov: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = cov.len();
    let mut l = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut diag = cov[j][j];
        for k in 0..j {
            diag -= l[j][k] * l[j][k];
        }
        if diag <= 0.0 || !diag.is_finite() {
            return Err(Error::Domain(format!(
                "covariance is not positive definite (pivot {j} = {diag})"
            )));
        }
        l[j][j] = diag.sqrt();
        for i in (j + 1)..n {
            let mut s = cov[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / l[j][j];
        }
    }
    Ok(l)
}

/// A model validated once and ready to generate many replicates.
#[derive(Debug, Clone)]
pub struct PreparedModel {
    model: NAModel,
    centered: Option<Vec<f64>>,
    chol: Option<Vec<Vec<f64>>>,
}

impl PreparedModel {
    pub fn new(model: &NAModel) -> Result<Self> {
        model.validate()?;
        let centered = match &model {
            NAModel::SamplingWithoutReplacement { population, .. } => {
                Some(centered_population(population))
            }
            _ => None,
        };
        let chol = match &model {
            NAModel::GaussianNegCov { covariance } => Some(cholesky(covariance)?),
            _ => None,
        };
        Ok(PreparedModel {
            model: model.clone(),
            centered,
            chol,
        })
    }

    pub fn model(&self) -> &NAModel {
        &self.model
    }

    /// One NA replicate. Coordinate k draws only from stream
    /// (master_seed, replicate, k), so paths replay exactly.
    pub fn sample_na(&self, master_seed: u64, replicate: u64) -> SamplePath {
        let values = match &self.model {
            NAModel::SamplingWithoutReplacement { n_draw, .. } => {
                let centered = self.centered.as_ref().expect("prepared with population");
                let n_pop = centered.len();
                let mut idx: Vec<u32> = (0..n_pop as u32).collect();
                let mut values = Vec::with_capacity(*n_draw);
                for k in 0..*n_draw {
                    let mut rng = CounterRng::new(master_seed, replicate, k as u64);
                    let j = k + rng.next_below((n_pop - k) as u64) as usize;
                    idx.swap(k, j);
                    values.push(centered[idx[k] as usize]);
                }
                values
            }
            NAModel::MultinomialCounts { trials, probs } => {
                let m = probs.len();
                let mut remaining = *trials;
                let mut rest = 1.0f64;
                let mut values = Vec::with_capacity(m);
                for (j, &p) in probs.iter().enumerate() {
                    let count = if j + 1 == m {
                        remaining
                    } else {
                        let mut rng = CounterRng::new(master_seed, replicate, j as u64);
                        let cond = if rest > 0.0 { (p / rest).clamp(0.0, 1.0) } else { 0.0 };
                        let c = rng.next_binomial(remaining, cond);
                        remaining -= c;
                        rest -= p;
                        c
                    };
                    values.push(count as f64 - *trials as f64 * p);
                }
                values
            }
            NAModel::GaussianNegCov { covariance } => {
                let l = self.chol.as_ref().expect("prepared with covariance");
                let n = covariance.len();
                let z: Vec<f64> = (0..n)
                    .map(|i| {
                        CounterRng::new(master_seed, replicate, i as u64).next_standard_normal()
                    })
                    .collect();
                (0..n)
                    .map(|i| (0..=i).map(|k| l[i][k] * z[k]).sum())
                    .collect()
            }
        };
        finish_path(values, master_seed, replicate)
    }

    /// The independent shadow replicate: identical marginals, independent
    /// coordinates, driven by the same per-coordinate streams so that paired
    /// comparisons share randomness.
    pub fn sample_independent(&self, master_seed: u64, replicate: u64) -> SamplePath {
        let values = match &self.model {
            NAModel::SamplingWithoutReplacement { n_draw, .. } => {
                let centered = self.centered.as_ref().expect("prepared with population");
                let n_pop = centered.len() as u64;
                (0..*n_draw)
                    .map(|k| {
                        let mut rng = CounterRng::new(master_seed, replicate, k as u64);
                        centered[rng.next_below(n_pop) as usize]
                    })
                    .collect()
            }
            NAModel::MultinomialCounts { trials, probs } => probs
                .iter()
                .enumerate()
                .map(|(j, &p)| {
                    let mut rng = CounterRng::new(master_seed, replicate, j as u64);
                    rng.next_binomial(*trials, p) as f64 - *trials as f64 * p
                })
                .collect(),
            NAModel::GaussianNegCov { covariance } => (0..covariance.len())
                .map(|i| {
                    let z =
                        CounterRng::new(master_seed, replicate, i as u64).next_standard_normal();
                    covariance[i][i].sqrt() * z
                })
                .collect(),
        };
        finish_path(values, master_seed, replicate)
    }
}

fn finish_path(values: Vec<f64>, master_seed: u64, replicate: u64) -> SamplePath {
    let mut prefix_sums = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    let mut running_max = f64::NEG_INFINITY;
    for &v in &values {
        acc += v;
        prefix_sums.push(acc);
        if acc > running_max {
            running_max = acc;
        }
    }
    SamplePath {
        values,
        prefix_sums,
        running_max,
        seed: replicate_key(master_seed, replicate),
    }
}

/// One NA replicate of `model`; prefer [`PreparedModel`] in loops.
pub fn sample_na_path(model: &NAModel, master_seed: u64, replicate: u64) -> Result<SamplePath> {
    Ok(PreparedModel::new(model)?.sample_na(master_seed, replicate))
}

/// One independent-marginals replicate matched to [`sample_na_path`].
pub fn sample_independent_path(
    model: &NAModel,
    master_seed: u64,
    replicate: u64,
) -> Result<SamplePath> {
    Ok(PreparedModel::new(model)?.sample_independent(master_seed, replicate))
}
