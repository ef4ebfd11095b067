//! Output builders shared by the CLI commands: evaluation text, sweep CSV,
//! validation CSV, and per-threshold comparison tables.
//!
//! Every float is printed with [`format_g17`], which round-trips f64 exactly,
//! and all iteration is in deterministic order, so identical configurations
//! produce byte-identical output.

use crate::bounds::BoundResult;
use crate::config::{evaluate_bound, Config};
use crate::error::{Error, Result};
use crate::montecarlo::{
    convex_comparison, domination_report, estimate_tail, supermartingale_max_moment,
    ConvexTestFunction, SupermartingaleKind, SupermartingaleSpec,
};

/// Fixed-width scientific float formatting with 17 significant digits; enough
/// to reproduce the underlying f64 bit pattern exactly.
pub fn format_g17(v: f64) -> String {
    format!("{v:.16e}")
}

pub const SWEEP_HEADER: &str = "x,bound,alpha,y,raw_value,clipped_value";
pub const VALIDATE_HEADER: &str =
    "check,model,x,bound,p_hat,ci_high,bound_raw,dominated,margin";

/// Evaluate one configured bound at one threshold. The first output line is
/// the clipped value alone; detail lines follow.
pub fn run_eval(config: &Config, bound_label: &str, x: f64) -> Result<String> {
    let sel = config
        .bounds
        .select
        .iter()
        .find(|s| s.label() == bound_label)
        .ok_or_else(|| {
            let known: Vec<String> =
                config.bounds.select.iter().map(|s| s.label()).collect();
            Error::Config(format!(
                "no configured bound labeled \"{bound_label}\"; configured: [{}]",
                known.join(", ")
            ))
        })?;
    let dists = config.marginals()?;
    let r = evaluate_bound(sel, &dists, x)?;
    let mut out = String::new();
    out.push_str(&format_g17(r.clipped_value));
    out.push('\n');
    out.push_str(&format!("family = {}\n", r.family.id()));
    out.push_str(&format!("raw_value = {}\n", format_g17(r.raw_value)));
    out.push_str(&format!("clipped_value = {}\n", format_g17(r.clipped_value)));
    out.push_str(&format!("degenerate = {}\n", r.degenerate));
    for (name, value) in &r.inputs {
        out.push_str(&format!("input {name} = {}\n", format_g17(*value)));
    }
    for (name, value) in &r.chosen_params {
        out.push_str(&format!("param {name} = {}\n", format_g17(*value)));
    }
    Ok(out)
}

/// Evaluate every configured bound on the whole x grid as CSV.
pub fn run_sweep(config: &Config) -> Result<String> {
    let dists = config.marginals()?;
    let xs = config.run.x_grid.points()?;
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for &x in &xs {
        for sel in &config.bounds.select {
            let r = evaluate_bound(sel, &dists, x)?;
            let alpha = r.param_value("alpha").map(format_g17).unwrap_or_default();
            let y = r.param_value("y").map(format_g17).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                format_g17(x),
                sel.label(),
                alpha,
                y,
                format_g17(r.raw_value),
                format_g17(r.clipped_value)
            ));
        }
    }
    Ok(out)
}

fn is_skippable(e: &Error) -> bool {
    matches!(e, Error::Domain(_) | Error::Divergence(_) | Error::Degenerate(_))
}

/// Run the configured Monte Carlo checks. Returns the CSV report and whether
/// any check failed (for the process exit status).
pub fn run_validate(config: &Config) -> Result<(String, bool)> {
    let model = config.model.to_model();
    let dists = config.marginals()?;
    let statistic = config.run.statistic_kind()?;
    let reps = config.run.reps;
    let seed = config.run.master_seed;
    let xs = config.run.x_grid.points()?;

    let mut out = String::from(VALIDATE_HEADER);
    out.push('\n');
    let mut any_failure = false;

    for check in &config.run.checks {
        match check.as_str() {
            "domination" => {
                for &x in &xs {
                    let estimate = estimate_tail(&model, x, reps, seed, statistic)?;
                    for sel in &config.bounds.select {
                        match evaluate_bound(sel, &dists, x) {
                            Ok(bound) => {
                                let verdict =
                                    domination_report(std::slice::from_ref(&bound), &estimate)?
                                        .remove(0);
                                any_failure |= !verdict.dominated;
                                out.push_str(&format!(
                                    "domination,{},{},{},{},{},{},{},{}\n",
                                    model.id(),
                                    format_g17(x),
                                    sel.label(),
                                    format_g17(estimate.p_hat),
                                    format_g17(estimate.ci3sigma.1),
                                    format_g17(bound.raw_value),
                                    verdict.dominated,
                                    format_g17(verdict.margin)
                                ));
                            }
                            Err(e) if is_skippable(&e) => {
                                out.push_str(&format!(
                                    "domination,{},{},{},{},{},,skip,\n",
                                    model.id(),
                                    format_g17(x),
                                    sel.label(),
                                    format_g17(estimate.p_hat),
                                    format_g17(estimate.ci3sigma.1)
                                ));
                            }
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
            "convex" => {
                let cc = config.run.convex.unwrap_or_default();
                let functions = [
                    ConvexTestFunction::Exponential { t: cc.t },
                    ConvexTestFunction::ShiftedSquare { a: cc.shift },
                    ConvexTestFunction::PositivePart,
                ];
                let mut jobs: Vec<(&'static str, ConvexTestFunction, bool)> = functions
                    .iter()
                    .map(|f| ("convex_final", *f, false))
                    .collect();
                if cc.use_max {
                    for f in functions {
                        if f.is_nondecreasing() {
                            jobs.push(("convex_max", f, true));
                        }
                    }
                }
                for (name, f, use_max) in jobs {
                    let r = convex_comparison(&model, f, reps, seed, use_max)?;
                    any_failure |= !r.pass;
                    out.push_str(&format!(
                        "{name},{},,{},{},{},{},{},{}\n",
                        model.id(),
                        f.id(),
                        format_g17(r.lhs_hat),
                        format_g17(r.lhs_hat + 3.0 * r.diff_sigma),
                        format_g17(r.rhs_hat),
                        r.pass,
                        format_g17(r.rhs_hat - r.lhs_hat)
                    ));
                }
            }
            "supermartingale" => {
                let sm = config.run.supermartingale.unwrap_or_default();
                let spec = SupermartingaleSpec {
                    kind: SupermartingaleKind::ExponentialGaussianWalk {
                        t: sm.t,
                        sigma: sm.sigma,
                    },
                    n: sm.n,
                    alpha: sm.alpha,
                };
                let r = supermartingale_max_moment(&spec, reps, seed)?;
                any_failure |= !r.pass;
                out.push_str(&format!(
                    "supermartingale,gaussian_walk,,max_moment,{},{},{},{},{}\n",
                    format_g17(r.lhs_hat),
                    format_g17(r.lhs_hat + 3.0 * r.lhs_sigma),
                    format_g17(r.rhs_exact),
                    r.pass,
                    format_g17(r.rhs_exact - r.lhs_hat)
                ));
            }
            other => {
                return Err(Error::Config(format!("unknown check \"{other}\"")));
            }
        }
    }
    Ok((out, any_failure))
}

/// Rank all configured bounds at each grid threshold, tightest first. Exact
/// value ties break in the declaration order of the bound families.
pub fn run_compare(config: &Config) -> Result<String> {
    let dists = config.marginals()?;
    let xs = config.run.x_grid.points()?;
    if config.bounds.select.is_empty() {
        return Err(Error::Config("no bounds configured to compare".into()));
    }
    let mut out = String::new();
    for &x in &xs {
        out.push_str(&format!("x = {}\n", format_g17(x)));
        let mut rows: Vec<(String, BoundResult<f64>)> = Vec::new();
        let mut skipped: Vec<(String, Error)> = Vec::new();
        for sel in &config.bounds.select {
            match evaluate_bound(sel, &dists, x) {
                Ok(r) => rows.push((sel.label(), r)),
                Err(e) if is_skippable(&e) => skipped.push((sel.label(), e)),
                Err(e) => return Err(e),
            }
        }
        rows.sort_by(|a, b| {
            a.1.raw_value
                .partial_cmp(&b.1.raw_value)
                .expect("bound values are never NaN")
                .then(a.1.family.cmp(&b.1.family))
        });
        out.push_str(&format!(
            "  {:<28} {:<24} {:<24} {:<24}\n",
            "bound", "raw_value", "clipped_value", "alpha"
        ));
        let best = rows.first().map(|(_, r)| r.raw_value);
        for (i, (label, r)) in rows.iter().enumerate() {
            let alpha = r.param_value("alpha").map(format_g17).unwrap_or_default();
            let marker = if i == 0 {
                "  <- tightest"
            } else if Some(r.raw_value) == best {
                "  (tie)"
            } else {
                ""
            };
            out.push_str(&format!(
                "  {:<28} {:<24} {:<24} {:<24}{}\n",
                label,
                format_g17(r.raw_value),
                format_g17(r.clipped_value),
                alpha,
                marker
            ));
        }
        for (label, e) in &skipped {
            out.push_str(&format!("  {label:<28} skipped: {e}\n"));
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    const BASE: &str = r#"
        [model]
        kind = "sampling_without_replacement"
        population = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0,
                      -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0]
        n_draw = 10

        [[bounds.select]]
        family = "hoeffding_azuma"

        [[bounds.select]]
        family = "bernstein_cond"
        form = "sharp"

        [run]
        x_grid = [4.0, 6.0]
        reps = 4000
        master_seed = 11
        checks = ["domination", "convex", "supermartingale"]

        [run.convex]
        t = 0.2
        use_max = true

        [run.supermartingale]
        n = 20
    "#;

    #[test]
    fn g17_formatting_is_stable() {
        assert_eq!(format_g17(1.0), "1.0000000000000000e0");
        assert_eq!(format_g17(0.5), "5.0000000000000000e-1");
        assert_eq!(format_g17(-0.03125), "-3.1250000000000000e-2");
        let v = 0.1 + 0.2;
        assert_eq!(format_g17(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn sweep_csv_shape_and_determinism() {
        let config = parse_config(BASE).unwrap();
        let a = run_sweep(&config).unwrap();
        let b = run_sweep(&config).unwrap();
        assert_eq!(a, b);
        let lines: Vec<&str> = a.trim_end().lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines.len(), 1 + 2 * 2);
        assert!(lines[1].starts_with("4.0000000000000000e0,hoeffding_azuma,"));
    }

    #[test]
    fn validate_csv_passes_for_an_honest_config() {
        let config = parse_config(BASE).unwrap();
        let (csv, any_failure) = run_validate(&config).unwrap();
        assert!(!any_failure, "{csv}");
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines[0], VALIDATE_HEADER);
        // 2 x-values * 2 bounds + 3 convex_final + 2 convex_max + 1 supermartingale.
        assert_eq!(lines.len(), 1 + 4 + 5 + 1);
        assert!(csv.contains("supermartingale,gaussian_walk"));
        let again = run_validate(&config).unwrap();
        assert_eq!(csv, again.0);
    }

    #[test]
    fn validate_flags_an_undersized_bound() {
        let text = BASE.replace(
            "family = \"bernstein_cond\"\n        form = \"sharp\"",
            "family = \"bernstein_cond\"\n        form = \"sharp\"\n        b_n = 1e-9",
        );
        let config = parse_config(&text).unwrap();
        let (csv, any_failure) = run_validate(&config).unwrap();
        assert!(any_failure, "{csv}");
        assert!(csv.contains(",false,"));
    }

    #[test]
    fn eval_headline_is_the_clipped_value() {
        let config = parse_config(BASE).unwrap();
        let text = run_eval(&config, "hoeffding_azuma", 0.0).unwrap();
        assert_eq!(text.lines().next().unwrap(), "1.0000000000000000e0");
        assert!(text.contains("family = hoeffding_azuma"));
        assert!(matches!(
            run_eval(&config, "nonexistent", 1.0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn compare_marks_the_tightest_bound() {
        let config = parse_config(BASE).unwrap();
        let table = run_compare(&config).unwrap();
        assert!(table.contains("<- tightest"));
        assert!(table.contains("x = 4.0000000000000000e0"));
    }
}
