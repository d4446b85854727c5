use hoforms::conv::{
    conv_entire, conv_series, fe_onevar_check, lambda2, lambda2_series, lambda_onevar, prop_identity_check,
    ConvolutionJob,
};
use hoforms::Error;
use num_complex::Complex64;
use serde_json::{json, Value};

use super::lfun::resolve_dual;
use super::{load_form, to_value};
use crate::args::{ConvArgs, ConvVerb};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{c64_json, parse_complex_list, Report};

fn resolved_constants() -> Value {
    json!({
        "identity": "Λ_{f,g}(s) = 2(2π)^{-(s+l-1)}(l-2)!Γ(s)(L_f#L_g)(s,l-1) - (l-2)!(2π)^{-(s+l-1)} Σ_{j=0}^{l-2} (-1)^j/j! Γ(s+j)L_f(s+j)L_g(l-1-j)",
        "functional_equation": "Λ_{f,g}(s) = -i^{k+l} w^{(k-l)/2-s+1} Λ_{f̂,ĝ}(k-l+2-s)",
        "notes": "docs/resolved-constants.md",
    })
}

fn points(given: &[String], default: &[Complex64]) -> Result<Vec<Complex64>, CliError> {
    if given.is_empty() {
        Ok(default.to_vec())
    } else {
        parse_complex_list(given)
    }
}

pub fn run(args: &ConvArgs, cfg: &RunConfig) -> Result<Report, CliError> {
    let f = load_form(&args.f)?;
    let g = load_form(&args.g)?;
    let width = args.width.unwrap_or(f.level.max(g.level) as f64);
    let f_hat = resolve_dual(&f, args.fhat.as_deref(), None)?;
    let g_hat = resolve_dual(&g, args.ghat.as_deref(), None)?;
    let mut job = ConvolutionJob::from_forms(&f, f_hat.as_ref(), &g, g_hat.as_ref(), width)?;
    if let Some(n) = args.truncation.or(cfg.truncation) {
        job = job.with_truncation(n);
    }
    if let Some(d) = args.depth {
        job = job.with_depth(d);
    }
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let (k, l) = (f.weight as f64, g.weight as f64);
    let two_variable = matches!(args.verb, ConvVerb::Series | ConvVerb::Lambda2 | ConvVerb::Entire);
    let s_default: Vec<Complex64> = match args.verb {
        ConvVerb::CheckProp => vec![c(4.0, 0.0), c(6.0, 0.0), c(8.0, 0.0)],
        ConvVerb::CheckFe => vec![c(5.0, 0.0), c(6.0, 1.0)],
        ConvVerb::Onevar => vec![c(6.0, 0.0)],
        _ => vec![c(k, 0.0)],
    };
    let s_points = points(&args.s, &s_default)?;
    let t_points = if two_variable { points(&args.t, &[c(l, 0.0)])? } else { Vec::new() };
    let verb = match args.verb {
        ConvVerb::Series => "series",
        ConvVerb::Lambda2 => "lambda2",
        ConvVerb::Entire => "entire",
        ConvVerb::Onevar => "onevar",
        ConvVerb::CheckProp => "check-prop",
        ConvVerb::CheckFe => "check-fe",
    };
    let inputs = json!({
        "f": args.f.display().to_string(),
        "g": args.g.display().to_string(),
        "weights": [f.weight, g.weight],
        "coefficients": [f.n_max(), g.n_max()],
        "width": width,
        "truncation": job.truncation,
        "depth": job.depth,
        "s": s_points.iter().map(|&s| c64_json(s)).collect::<Vec<_>>(),
        "t": t_points.iter().map(|&t| c64_json(t)).collect::<Vec<_>>(),
    });
    let mut report = Report::new(format!("conv {verb}"), inputs);
    if matches!(args.verb, ConvVerb::CheckProp | ConvVerb::CheckFe) {
        report.constants(resolved_constants());
    }
    for &s in &s_points {
        if two_variable {
            for &t in &t_points {
                let entry = two_variable_entry(args.verb, &job, s, t, cfg.tolerance, &mut report)?;
                report.push(entry);
            }
            continue;
        }
        let entry = match args.verb {
            ConvVerb::Onevar => json!({ "s": c64_json(s), "value": c64_json(lambda_onevar(&job, s)?) }),
            ConvVerb::CheckProp | ConvVerb::CheckFe => {
                let check = if args.verb == ConvVerb::CheckProp {
                    prop_identity_check(&job, s)?
                } else {
                    fe_onevar_check(&job, s)?
                };
                report.residual(check.residual, check.lhs.norm().max(check.rhs.norm()), cfg.tolerance);
                let mut v = to_value(&check)?;
                v["s"] = c64_json(s);
                v
            }
            _ => unreachable!("two-variable verbs handled above"),
        };
        report.push(entry);
    }
    Ok(report)
}

fn two_variable_entry(
    verb: ConvVerb,
    job: &ConvolutionJob,
    s: Complex64,
    t: Complex64,
    tol: f64,
    report: &mut Report,
) -> Result<Value, CliError> {
    let at = json!({ "s": c64_json(s), "t": c64_json(t) });
    let mut entry = at.clone();
    match verb {
        ConvVerb::Series => {
            let v = conv_series(job, s, t, job.truncation);
            report.residual(v.tail_bound, v.value.norm(), tol);
            entry["value"] = c64_json(v.value);
            entry["tail_bound"] = json!(v.tail_bound);
            entry["converged"] = json!(v.converged);
        }
        ConvVerb::Lambda2 => match lambda2(job, s, t) {
            Ok(value) => {
                entry["value"] = c64_json(value);
                let series = lambda2_series(job, s, t)?;
                if series.converged {
                    let gap = (series.value - value).norm();
                    report.residual(gap, value.norm(), tol);
                    entry["series_value"] = c64_json(series.value);
                    entry["residual"] = json!(gap);
                }
            }
            Err(Error::Pole { residue_re, residue_im, .. }) => {
                entry["pole"] = json!({ "residue": [residue_re, residue_im] });
            }
            Err(e) => return Err(e.into()),
        },
        ConvVerb::Entire => entry["value"] = c64_json(conv_entire(job, s, t)?),
        _ => unreachable!("one-variable verbs handled by the caller"),
    }
    Ok(entry)
}
