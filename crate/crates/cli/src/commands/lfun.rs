use hoforms::forms::{fricke_dual, FrickeData, QExpansion};
use hoforms::lfun::{completed_lambda, fe_check, lambda_nu_decomposition_residual, LFunctionJob};
use num_complex::Complex64;
use serde_json::json;

use super::{load_form, to_value};
use crate::args::{Grid, LfunArgs, LfunVerb};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{c64_json, parse_complex_list, Report};

const CHECK_SPLIT: f64 = 1.2;

/// `f|S_w`: an explicit file, a Fricke eigenvalue, or `f` itself at level 1.
pub fn resolve_dual(
    f: &QExpansion,
    path: Option<&std::path::Path>,
    eps: Option<i8>,
) -> Result<Option<QExpansion>, CliError> {
    if let Some(p) = path {
        return Ok(Some(load_form(p)?));
    }
    if let Some(e) = eps {
        return Ok(Some(fricke_dual(f, &FrickeData::Eigenvalue(e))?));
    }
    Ok((f.level == 1).then(|| f.clone()))
}

pub fn grid_points(grid: Grid, weight: i64) -> Vec<Complex64> {
    let k = weight as f64;
    match grid {
        Grid::Critical => [0.0, 1.0, 2.5, 5.0].iter().map(|&t| Complex64::new(k / 2.0, t)).collect(),
        Grid::Strip => [1.0, k / 4.0, k / 2.0, 3.0 * k / 4.0, k - 1.0].iter().map(|&s| Complex64::new(s, 1.0)).collect(),
    }
}

pub fn run(args: &LfunArgs, cfg: &RunConfig) -> Result<Report, CliError> {
    let f = load_form(&args.f)?;
    if let Some(k) = args.weight {
        if k != f.weight {
            return Err(CliError::Usage(format!("--weight {k} does not match the file's weight {}", f.weight)));
        }
    }
    let width = args.width.unwrap_or(f.level as f64);
    let dual = resolve_dual(&f, args.fhat.as_deref(), args.eps)?;
    let mut job = match &dual {
        Some(d) => LFunctionJob::from_forms(&f, d, width)?,
        None => LFunctionJob::new(f.to_series()?.to_complex(), None, f.weight, width)?,
    };
    if let Some(n) = args.truncation.or(cfg.truncation) {
        job = job.with_truncation(n);
    }
    // An off-centre split keeps the functional-equation check from holding by symmetry.
    let split = args.split.or((args.verb == LfunVerb::CheckFe).then_some(CHECK_SPLIT));
    if let Some(split) = split {
        job = job.with_split(split)?;
    }
    let points = if !args.s.is_empty() {
        parse_complex_list(&args.s)?
    } else if let Some(grid) = args.grid {
        grid_points(grid, f.weight)
    } else if args.verb == LfunVerb::Decompose {
        vec![Complex64::new(f.weight as f64 + 8.0, 0.0)]
    } else {
        grid_points(Grid::Critical, f.weight)
    };
    let inputs = json!({
        "f": args.f.display().to_string(),
        "label": f.label,
        "weight": f.weight,
        "level": f.level,
        "coefficients": f.n_max(),
        "width": width,
        "dual": dual.as_ref().map(|d| d.label.clone()),
        "truncation": job.truncation,
        "split": job.split,
        "s": points.iter().map(|&s| c64_json(s)).collect::<Vec<_>>(),
    });
    let verb = match args.verb {
        LfunVerb::Eval => "eval",
        LfunVerb::CheckFe => "check-fe",
        LfunVerb::Decompose => "decompose",
    };
    let mut report = Report::new(format!("lfun {verb}"), inputs);
    for s in points {
        match args.verb {
            LfunVerb::Eval => {
                let v = completed_lambda(&job, s)?;
                report.residual(v.tail_bound, v.value.norm(), cfg.tolerance);
                report.push(to_value(&v)?);
            }
            LfunVerb::CheckFe => {
                let c = fe_check(&job, s)?;
                report.residual(c.residual, c.lhs.norm().max(c.rhs.norm()), cfg.tolerance);
                let mut v = to_value(&c)?;
                v["s"] = c64_json(s);
                report.push(v);
            }
            LfunVerb::Decompose => {
                let r = lambda_nu_decomposition_residual(&job, s)?;
                let lambda = completed_lambda(&job, s)?.value;
                report.residual(r, lambda.norm(), cfg.tolerance);
                report.push(json!({ "s": c64_json(s), "lambda": c64_json(lambda), "residual": r }));
            }
        }
    }
    Ok(report)
}
