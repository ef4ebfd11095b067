//! TOML run configuration: which model to simulate, which marginal laws feed
//! the moment layer, which bounds to evaluate (and how their free parameters
//! are chosen), and the Monte Carlo run plan.

use std::path::Path;

use serde::Deserialize;

use crate::bounds::{
    bennett_b, bernstein_b1, bernstein_condition_tail_bound, exp_moment_constants,
    exp_moment_tail_bound, fuk_nagaev_h, fuk_nagaev_tail_bound, fuk_tail_bound,
    rio_tail_bound, semi_exponential_tail_bound, weak_moment_tail_bound, BernsteinForm,
    BoundFamily, BoundResult, BoundedRangeSpec, FukNagaevVariant, GaussianFamilyArgs, RioForm,
    SemiExpForm,
};
use crate::error::{Error, Result};
use crate::moments::{rademacher, smallest_bernstein_scale, DistKind, DistributionSpec};
use crate::montecarlo::StatisticKind;
use crate::sampler::NAModel;
use crate::transforms::{minimize_over_alpha, optimize_truncation_y, TruncationMode};

const BERNSTEIN_SCALE_K_MAX: u32 = 10;

/// A fully parsed and structurally validated run configuration.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub model: ModelConfig,
    pub distributions: Option<DistributionsConfig>,
    #[serde(default)]
    pub bounds: BoundsConfig,
    pub run: RunConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    SamplingWithoutReplacement { population: Vec<f64>, n_draw: usize },
    MultinomialCounts { trials: u64, probs: Vec<f64> },
    GaussianNegCov { covariance: Vec<Vec<f64>> },
}

impl ModelConfig {
    pub fn to_model(&self) -> NAModel {
        match self {
            ModelConfig::SamplingWithoutReplacement { population, n_draw } => {
                NAModel::SamplingWithoutReplacement {
                    population: population.clone(),
                    n_draw: *n_draw,
                }
            }
            ModelConfig::MultinomialCounts { trials, probs } => NAModel::MultinomialCounts {
                trials: *trials,
                probs: probs.clone(),
            },
            ModelConfig::GaussianNegCov { covariance } => NAModel::GaussianNegCov {
                covariance: covariance.clone(),
            },
        }
    }
}

/// Optional explicit marginal laws; when absent the model's own marginals are
/// used.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionsConfig {
    #[serde(default)]
    pub entry: Vec<DistEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistEntry {
    pub kind: String,
    #[serde(default = "one")]
    pub copies: usize,
    pub sigma: Option<f64>,
    pub cut: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub support: Option<Vec<[f64; 2]>>,
    pub population: Option<Vec<f64>>,
    pub centered: Option<bool>,
}

fn one() -> usize {
    1
}

impl DistEntry {
    fn build(&self) -> Result<DistributionSpec> {
        fn req<T: Copy>(v: &Option<T>, field: &str, kind: &str) -> Result<T> {
            v.ok_or_else(|| {
                Error::Config(format!("distribution kind `{kind}` needs field `{field}`"))
            })
        }
        let centered = self.centered.unwrap_or(true);
        let kind = match self.kind.as_str() {
            "rademacher" => return Ok(rademacher()),
            "bounded_discrete" => DistKind::BoundedDiscrete {
                support: self
                    .support
                    .as_ref()
                    .ok_or_else(|| {
                        Error::Config(
                            "distribution kind `bounded_discrete` needs field `support`".into(),
                        )
                    })?
                    .iter()
                    .map(|[v, p]| (*v, *p))
                    .collect(),
            },
            "uniform" => DistKind::Uniform {
                a: req(&self.a, "a", "uniform")?,
                b: req(&self.b, "b", "uniform")?,
            },
            "centered_gaussian" => DistKind::CenteredGaussian {
                sigma: req(&self.sigma, "sigma", "centered_gaussian")?,
            },
            "truncated_centered_gaussian" => DistKind::TruncatedCenteredGaussian {
                sigma: req(&self.sigma, "sigma", "truncated_centered_gaussian")?,
                cut: req(&self.cut, "cut", "truncated_centered_gaussian")?,
            },
            "finite_population_value" => DistKind::FinitePopulationValue {
                population: self
                    .population
                    .clone()
                    .ok_or_else(|| {
                        Error::Config(
                            "distribution kind `finite_population_value` needs field \
                             `population`"
                                .into(),
                        )
                    })?,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown distribution kind `{other}`; expected one of rademacher, \
                     bounded_discrete, uniform, centered_gaussian, \
                     truncated_centered_gaussian, finite_population_value"
                )))
            }
        };
        DistributionSpec::new(kind, centered)
            .map_err(|e| Error::Config(format!("[distributions] {e}")))
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    #[serde(default)]
    pub select: Vec<BoundSelect>,
}

/// One bound to evaluate, with the family's tuning knobs and optional manual
/// overrides of the moment inputs that would otherwise be derived from the
/// marginal laws.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSelect {
    pub family: String,
    /// Label used in output; defaults to the family (plus variant/form).
    pub id: Option<String>,
    /// fuk_nagaev only: "hn" (default), "bennett", or "bernstein".
    pub variant: Option<String>,
    /// semi_exp: "piecewise"/"smoothed"; bernstein_cond: "sharp"/"simple";
    /// rio: "young"/"closed"/"delta".
    pub form: Option<String>,
    /// A number in (0, 1), or the string "auto".
    pub alpha: Option<AlphaChoice>,
    /// A positive number, or "default" (closed-form rule) or "scan".
    pub y: Option<YChoice>,
    pub p: Option<f64>,
    pub a: Option<f64>,
    pub tau1_factor: Option<f64>,
    pub n: Option<u64>,
    pub v: Option<f64>,
    pub m: Option<f64>,
    pub k: Option<f64>,
    pub b_n: Option<f64>,
    pub v_n: Option<f64>,
    pub a_p: Option<f64>,
    pub k_n: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AlphaChoice {
    Fixed(f64),
    Rule(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum YChoice {
    Fixed(f64),
    Rule(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum AlphaPlan {
    Fixed(f64),
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum YPlan {
    Fixed(f64),
    DefaultRule,
    Scan,
}

impl BoundSelect {
    pub fn label(&self) -> String {
        if let Some(id) = &self.id {
            return id.clone();
        }
        match (&self.variant, &self.form) {
            (Some(v), _) => format!("{}_{v}", self.family),
            (_, Some(f)) => format!("{}_{f}", self.family),
            _ => self.family.clone(),
        }
    }

    fn alpha_plan(&self) -> Result<AlphaPlan> {
        match &self.alpha {
            None => Ok(AlphaPlan::Fixed(0.5)),
            Some(AlphaChoice::Fixed(v)) => Ok(AlphaPlan::Fixed(*v)),
            Some(AlphaChoice::Rule(s)) if s == "auto" => Ok(AlphaPlan::Auto),
            Some(AlphaChoice::Rule(s)) => Err(Error::Config(format!(
                "alpha must be a number in (0, 1) or \"auto\", got \"{s}\""
            ))),
        }
    }

    fn y_plan(&self) -> Result<YPlan> {
        match &self.y {
            None => Ok(YPlan::DefaultRule),
            Some(YChoice::Fixed(v)) => Ok(YPlan::Fixed(*v)),
            Some(YChoice::Rule(s)) if s == "default" => Ok(YPlan::DefaultRule),
            Some(YChoice::Rule(s)) if s == "scan" => Ok(YPlan::Scan),
            Some(YChoice::Rule(s)) => Err(Error::Config(format!(
                "y must be a positive number, \"default\", or \"scan\", got \"{s}\""
            ))),
        }
    }

    /// Structural validation that does not depend on x or the marginals.
    pub fn validate(&self) -> Result<()> {
        let allowed: &[&str] = match self.family.as_str() {
            "fuk_nagaev_h" | "bennett" | "bernstein1" => &["alpha", "v", "n"],
            "fuk_nagaev" => &["alpha", "y", "p", "n", "b_n", "variant"],
            "weak_moment" => &["alpha", "y", "p", "n", "b_n", "a_p"],
            "fuk_pth" => &["alpha", "p", "b_n", "v_n"],
            "semi_exp" => &["alpha", "p", "k_n", "form"],
            "exp_moment" => &["alpha", "p", "a", "tau1_factor", "k", "n"],
            "bernstein_cond" => &["alpha", "m", "b_n", "form"],
            "rio" => &["alpha", "form"],
            "hoeffding_azuma" => &["alpha"],
            other => {
                return Err(Error::Config(format!(
                    "unknown bound family `{other}`; expected one of fuk_nagaev_h, bennett, \
                     bernstein1, fuk_nagaev, weak_moment, fuk_pth, semi_exp, exp_moment, \
                     bernstein_cond, rio, hoeffding_azuma"
                )))
            }
        };
        let set: [(&str, bool); 13] = [
            ("variant", self.variant.is_some()),
            ("form", self.form.is_some()),
            ("alpha", self.alpha.is_some()),
            ("y", self.y.is_some()),
            ("p", self.p.is_some()),
            ("a", self.a.is_some()),
            ("tau1_factor", self.tau1_factor.is_some()),
            ("n", self.n.is_some()),
            ("v", self.v.is_some()),
            ("m", self.m.is_some()),
            ("k", self.k.is_some()),
            ("b_n", self.b_n.is_some()),
            ("v_n", self.v_n.is_some()),
        ];
        for (name, is_set) in set {
            if is_set && !allowed.contains(&name) {
                return Err(Error::Config(format!(
                    "field `{name}` does not apply to bound family `{}`",
                    self.family
                )));
            }
        }
        if self.k_n.is_some() && self.family != "semi_exp" {
            return Err(Error::Config(format!(
                "field `k_n` does not apply to bound family `{}`",
                self.family
            )));
        }
        if self.a_p.is_some() && self.family != "weak_moment" {
            return Err(Error::Config(format!(
                "field `a_p` does not apply to bound family `{}`",
                self.family
            )));
        }
        let alpha = self.alpha_plan()?;
        let y = self.y_plan()?;
        if alpha == AlphaPlan::Auto && y == YPlan::Scan {
            return Err(Error::Config(
                "alpha = \"auto\" and y = \"scan\" cannot be combined; fix one of the two \
                 parameters"
                    .into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum XGrid {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        #[serde(default)]
        scale: GridScale,
    },
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    #[default]
    Linear,
    Log,
}

impl XGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        match self {
            XGrid::List(xs) => {
                if xs.is_empty() {
                    return Err(Error::Config("x_grid list must be nonempty".into()));
                }
                if xs.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Config("x_grid values must be finite".into()));
                }
                Ok(xs.clone())
            }
            XGrid::Range {
                start,
                stop,
                count,
                scale,
            } => {
                if *count == 0 {
                    return Err(Error::Config("x_grid count must be >= 1".into()));
                }
                if !start.is_finite() || !stop.is_finite() {
                    return Err(Error::Config("x_grid endpoints must be finite".into()));
                }
                if *scale == GridScale::Log && (*start <= 0.0 || *stop <= 0.0) {
                    return Err(Error::Config(
                        "log-scaled x_grid needs positive endpoints".into(),
                    ));
                }
                if *count == 1 {
                    return Ok(vec![*start]);
                }
                let step = 1.0 / (*count as f64 - 1.0);
                Ok((0..*count)
                    .map(|i| {
                        let t = i as f64 * step;
                        match scale {
                            GridScale::Linear => start + t * (stop - start),
                            GridScale::Log => (start.ln() + t * (stop.ln() - start.ln())).exp(),
                        }
                    })
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub x_grid: XGrid,
    #[serde(default = "default_reps")]
    pub reps: u64,
    #[serde(default)]
    pub master_seed: u64,
    pub threads: Option<usize>,
    pub out: Option<String>,
    /// "max_prefix" (default) or "final_sum".
    #[serde(default = "default_statistic")]
    pub statistic: String,
    /// Which validation checks to run: "domination", "convex",
    /// "supermartingale".
    #[serde(default = "default_checks")]
    pub checks: Vec<String>,
    pub convex: Option<ConvexCheckConfig>,
    pub supermartingale: Option<SupermartingaleCheckConfig>,
}

fn default_reps() -> u64 {
    100_000
}

fn default_statistic() -> String {
    "max_prefix".into()
}

fn default_checks() -> Vec<String> {
    vec!["domination".into()]
}

impl RunConfig {
    pub fn statistic_kind(&self) -> Result<StatisticKind> {
        match self.statistic.as_str() {
            "max_prefix" => Ok(StatisticKind::MaxPrefix),
            "final_sum" => Ok(StatisticKind::FinalSum),
            other => Err(Error::Config(format!(
                "statistic must be \"max_prefix\" or \"final_sum\", got \"{other}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvexCheckConfig {
    /// Rate of the exponential test function.
    #[serde(default = "default_convex_t")]
    pub t: f64,
    /// Center of the shifted-square test function.
    #[serde(default)]
    pub shift: f64,
    /// Also compare prefix maxima (monotone test functions only).
    #[serde(default)]
    pub use_max: bool,
}

fn default_convex_t() -> f64 {
    0.1
}

impl Default for ConvexCheckConfig {
    fn default() -> Self {
        ConvexCheckConfig {
            t: default_convex_t(),
            shift: 0.0,
            use_max: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupermartingaleCheckConfig {
    #[serde(default = "default_sm_t")]
    pub t: f64,
    #[serde(default = "default_sm_sigma")]
    pub sigma: f64,
    #[serde(default = "default_sm_n")]
    pub n: usize,
    #[serde(default = "default_sm_alpha")]
    pub alpha: f64,
}

fn default_sm_t() -> f64 {
    0.5
}

fn default_sm_sigma() -> f64 {
    1.0
}

fn default_sm_n() -> usize {
    100
}

fn default_sm_alpha() -> f64 {
    0.5
}

impl Default for SupermartingaleCheckConfig {
    fn default() -> Self {
        SupermartingaleCheckConfig {
            t: default_sm_t(),
            sigma: default_sm_sigma(),
            n: default_sm_n(),
            alpha: default_sm_alpha(),
        }
    }
}

impl Config {
    /// Structural validation of everything that can be checked without
    /// evaluating a bound at a particular x.
    pub fn validate(&self) -> Result<()> {
        self.model
            .to_model()
            .validate()
            .map_err(|e| Error::Config(format!("[model] {e}")))?;
        self.marginals()?;
        for sel in &self.bounds.select {
            sel.validate()?;
        }
        self.run.x_grid.points()?;
        self.run.statistic_kind()?;
        if self.run.reps == 0 {
            return Err(Error::Config("reps must be >= 1".into()));
        }
        for check in &self.run.checks {
            if !matches!(check.as_str(), "domination" | "convex" | "supermartingale") {
                return Err(Error::Config(format!(
                    "unknown check \"{check}\"; expected domination, convex, or \
                     supermartingale"
                )));
            }
        }
        Ok(())
    }

    /// The marginal laws the moment layer works from: the explicit
    /// [distributions] entries when present, the model's own marginals
    /// otherwise.
    pub fn marginals(&self) -> Result<Vec<DistributionSpec>> {
        if let Some(dc) = &self.distributions {
            if !dc.entry.is_empty() {
                let mut out = Vec::new();
                for e in &dc.entry {
                    if e.copies == 0 {
                        return Err(Error::Config("copies must be >= 1".into()));
                    }
                    let spec = e.build()?;
                    out.extend(std::iter::repeat_n(spec, e.copies));
                }
                return Ok(out);
            }
        }
        self.model
            .to_model()
            .marginals()
            .map_err(|e| Error::Config(format!("[model] {e}")))
    }
}

pub fn parse_config(text: &str) -> Result<Config> {
    let config: Config =
        toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

fn sum_second_moment(dists: &[DistributionSpec]) -> f64 {
    dists.iter().map(|d| d.second_moment()).sum()
}

fn range_of(dists: &[DistributionSpec]) -> Result<BoundedRangeSpec<f64>> {
    let mut lows = Vec::with_capacity(dists.len());
    let mut highs = Vec::with_capacity(dists.len());
    for d in dists {
        let (lo, hi) = d.range().ok_or_else(|| {
            Error::Domain(
                "range-based bounds need bounded marginals, but at least one law is \
                 unbounded"
                    .into(),
            )
        })?;
        lows.push(lo);
        highs.push(hi);
    }
    BoundedRangeSpec::new(lows, highs)
}

/// Evaluate one configured bound at threshold x against the given marginals.
///
/// Derived moment inputs are recomputed from `dists` unless the selection
/// overrides them; alpha and y are resolved according to the selection's
/// plans ("auto"/"default"/"scan" or fixed values).
pub fn evaluate_bound(
    sel: &BoundSelect,
    dists: &[DistributionSpec],
    x: f64,
) -> Result<BoundResult<f64>> {
    sel.validate()?;
    if dists.is_empty() {
        return Err(Error::Domain("need at least one marginal law".into()));
    }
    let y_plan = sel.y_plan()?;
    match sel.alpha_plan()? {
        AlphaPlan::Fixed(alpha) => evaluate_at_alpha(sel, dists, x, alpha, y_plan),
        AlphaPlan::Auto => {
            let objective = |alpha: f64| {
                evaluate_at_alpha(sel, dists, x, alpha, y_plan)
                    .map(|r| r.raw_value)
                    .unwrap_or(f64::INFINITY)
            };
            let best = minimize_over_alpha(objective);
            evaluate_at_alpha(sel, dists, x, best.arg, y_plan)
        }
    }
}

fn evaluate_at_alpha(
    sel: &BoundSelect,
    dists: &[DistributionSpec],
    x: f64,
    alpha: f64,
    y_plan: YPlan,
) -> Result<BoundResult<f64>> {
    let n_default = dists.len() as u64;
    match sel.family.as_str() {
        "fuk_nagaev_h" | "bennett" | "bernstein1" => {
            let n = sel.n.unwrap_or(n_default);
            let v = match sel.v {
                Some(v) => v,
                None => sum_second_moment(dists).sqrt(),
            };
            let (family, raw) = match sel.family.as_str() {
                "fuk_nagaev_h" => (
                    BoundFamily::FukNagaevH,
                    fuk_nagaev_h(&GaussianFamilyArgs::new(x, v, n, alpha)?),
                ),
                "bennett" => (BoundFamily::Bennett, bennett_b(x, v, alpha)?),
                _ => (BoundFamily::Bernstein1, bernstein_b1(x, v, alpha)?),
            };
            Ok(BoundResult::new(family, raw)
                .input("x", x)
                .input("v", v)
                .input("n", n as f64)
                .param("alpha", alpha))
        }
        "fuk_nagaev" => {
            let n = sel.n.unwrap_or(n_default);
            let variant = match sel.variant.as_deref() {
                None | Some("hn") => FukNagaevVariant::Hn,
                Some("bennett") => FukNagaevVariant::Bennett,
                Some("bernstein") => FukNagaevVariant::Bernstein,
                Some(other) => {
                    return Err(Error::Config(format!(
                        "unknown fuk_nagaev variant \"{other}\"; expected hn, bennett, or \
                         bernstein"
                    )))
                }
            };
            let eval_y = |y: f64| -> Result<BoundResult<f64>> {
                let b_n_y = match sel.b_n {
                    Some(v) => v,
                    None => {
                        let mut sum = 0.0;
                        for d in dists {
                            sum += d.truncated_second_moment(y)?;
                        }
                        sum
                    }
                };
                let tail: f64 = dists.iter().map(|d| d.survival(y)).sum();
                fuk_nagaev_tail_bound(x, y, alpha, n, b_n_y, tail, variant)
            };
            let y = resolve_y(y_plan, x, sel.p.unwrap_or(2.0), n as f64, &eval_y)?;
            eval_y(y)
        }
        "weak_moment" => {
            let p = sel.p.unwrap_or(4.0);
            let n = sel.n.unwrap_or(n_default);
            let b_n = match sel.b_n {
                Some(v) => v,
                None => sum_second_moment(dists),
            };
            let a_p = match sel.a_p {
                Some(v) => v,
                None => {
                    let mut sum = 0.0;
                    for d in dists {
                        sum += d.weak_norm_p(p)?;
                    }
                    sum
                }
            };
            let eval_y = |y: f64| weak_moment_tail_bound(x, y, alpha, n, b_n, a_p, p);
            let y = resolve_y(y_plan, x, p, n as f64, &eval_y)?;
            eval_y(y)
        }
        "fuk_pth" => {
            let p = sel.p.unwrap_or(4.0);
            let b_n = match sel.b_n {
                Some(v) => v,
                None => sum_second_moment(dists),
            };
            let v_n = match sel.v_n {
                Some(v) => v,
                None => {
                    let mut sum = 0.0;
                    for d in dists {
                        sum += d.abs_moment(p)?;
                    }
                    sum
                }
            };
            fuk_tail_bound(x, alpha, p, b_n, v_n)
        }
        "semi_exp" => {
            let p = sel.p.unwrap_or(0.5);
            let k_n = match sel.k_n {
                Some(v) => v,
                None => {
                    let mut sum = 0.0;
                    for d in dists {
                        sum += d.semi_exp_second_moment(p)?;
                    }
                    sum
                }
            };
            let form = match sel.form.as_deref() {
                None | Some("piecewise") => SemiExpForm::Piecewise,
                Some("smoothed") => SemiExpForm::Smoothed,
                Some(other) => {
                    return Err(Error::Config(format!(
                        "unknown semi_exp form \"{other}\"; expected piecewise or smoothed"
                    )))
                }
            };
            semi_exponential_tail_bound(x, alpha, p, k_n, form)
        }
        "exp_moment" => {
            let p = sel.p.unwrap_or(2.0);
            let a = sel.a.unwrap_or(1.0);
            let factor = sel.tau1_factor.unwrap_or(2.0);
            let k = match sel.k {
                Some(v) => v,
                None => {
                    let mut sum = 0.0;
                    for d in dists {
                        match d.exp_abs_moment(a, p)? {
                            Some(term) => sum += term,
                            None => {
                                return Err(Error::Divergence(format!(
                                    "E exp(a|X|^p) diverges for at least one marginal at \
                                     a = {a}, p = {p}; lower a or override k"
                                )))
                            }
                        }
                    }
                    sum
                }
            };
            let constants = exp_moment_constants(p, a, k, factor)?;
            let n = sel.n.unwrap_or(n_default);
            exp_moment_tail_bound(x, n, alpha, &constants)
        }
        "bernstein_cond" => {
            let b_n = match sel.b_n {
                Some(v) => v,
                None => sum_second_moment(dists),
            };
            let m = match sel.m {
                Some(v) => v,
                None => smallest_bernstein_scale(dists, BERNSTEIN_SCALE_K_MAX).ok_or_else(
                    || {
                        Error::Domain(
                            "no finite scale satisfies the Bernstein moment condition for \
                             these marginals; provide m explicitly"
                                .into(),
                        )
                    },
                )?,
            };
            let form = match sel.form.as_deref() {
                None | Some("sharp") => BernsteinForm::Sharp,
                Some("simple") => BernsteinForm::Simple,
                Some(other) => {
                    return Err(Error::Config(format!(
                        "unknown bernstein_cond form \"{other}\"; expected sharp or simple"
                    )))
                }
            };
            bernstein_condition_tail_bound(x, alpha, m, b_n, form)
        }
        "rio" | "hoeffding_azuma" => {
            let range = range_of(dists)?;
            let form = if sel.family == "hoeffding_azuma" {
                RioForm::HoeffdingAzuma
            } else {
                match sel.form.as_deref() {
                    None | Some("young") => RioForm::YoungForm,
                    Some("closed") => RioForm::ClosedForm,
                    Some("delta") => RioForm::DeltaForm,
                    Some(other) => {
                        return Err(Error::Config(format!(
                            "unknown rio form \"{other}\"; expected young, closed, or delta"
                        )))
                    }
                }
            };
            rio_tail_bound(x, alpha, &range, form)
        }
        other => Err(Error::Config(format!("unknown bound family `{other}`"))),
    }
}

fn resolve_y(
    plan: YPlan,
    x: f64,
    p: f64,
    n: f64,
    eval: &dyn Fn(f64) -> Result<BoundResult<f64>>,
) -> Result<f64> {
    match plan {
        YPlan::Fixed(y) => Ok(y),
        YPlan::DefaultRule | YPlan::Scan => {
            let mode = if plan == YPlan::DefaultRule {
                TruncationMode::DefaultRule
            } else {
                TruncationMode::NumericScan
            };
            let objective =
                |y: f64| eval(y).map(|r| r.raw_value).unwrap_or(f64::INFINITY);
            Ok(optimize_truncation_y(objective, x, p, n, mode)?.arg)
        }
    }
}
