use hoforms::forms::{
    delta_qexp, eisenstein_qexp, eta_product, fricke_dual, level11_newform, petersson_numeric, ramanujan_bound_holds,
    save_qexp, FrickeData, QExpansion,
};
use serde_json::json;

use super::{json_text, load_form, read_input};
use crate::args::{FormsArgs, FormsVerb};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{c64_json, Report};

fn required<'a, T>(x: &'a Option<T>, flag: &str, verb: &str) -> Result<&'a T, CliError> {
    x.as_ref().ok_or_else(|| CliError::Usage(format!("{verb} needs --{flag}")))
}

/// `m:r` pairs for an eta quotient.
pub fn parse_factors(items: &[String]) -> Result<Vec<(u64, i64)>, CliError> {
    items
        .iter()
        .map(|item| {
            let bad = || CliError::Parse(format!("eta factor must look like m:r, got {item:?}"));
            let (m, r) = item.split_once(':').ok_or_else(bad)?;
            Ok((m.trim().parse().map_err(|_| bad())?, r.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

pub fn run(args: &FormsArgs, cfg: &RunConfig) -> Result<Report, CliError> {
    let verb = match args.verb {
        FormsVerb::Eisenstein => "eisenstein",
        FormsVerb::Delta => "delta",
        FormsVerb::Level11 => "level11",
        FormsVerb::Eta => "eta",
        FormsVerb::Convert => "convert",
        FormsVerb::Dual => "dual",
        FormsVerb::Petersson => "petersson",
        FormsVerb::Ramanujan => "ramanujan",
    };
    let input = |flag_verb: &str| -> Result<QExpansion, CliError> { load_form(required(&args.input, "input", flag_verb)?) };
    let mut inputs = json!({ "n": args.n });
    if let Some(p) = &args.input {
        inputs["input"] = json!(p.display().to_string());
    }
    let generated = match args.verb {
        FormsVerb::Eisenstein => Some(eisenstein_qexp(*required(&args.weight, "weight", verb)?, args.n)?),
        FormsVerb::Delta => Some(delta_qexp(args.n)?),
        FormsVerb::Level11 => Some(level11_newform(args.n)?),
        FormsVerb::Eta => {
            let factors = parse_factors(&args.factors)?;
            if factors.is_empty() {
                return Err(CliError::Usage("eta needs --factors".into()));
            }
            let weight = *required(&args.weight, "weight", verb)?;
            let level = *required(&args.level, "level", verb)?;
            let label = args.label.clone().unwrap_or_else(|| "eta".into());
            inputs["factors"] = json!(args.factors);
            Some(eta_product(&factors, args.n, &label, weight, level)?)
        }
        FormsVerb::Convert => {
            let path = required(&args.input, "input", verb)?;
            let label = args.label.clone().unwrap_or_else(|| path.display().to_string());
            let weight = *required(&args.weight, "weight", verb)?;
            let level = *required(&args.level, "level", verb)?;
            Some(QExpansion::from_csv(&read_input(path)?, &label, weight, level)?)
        }
        FormsVerb::Dual => {
            let eps = *required(&args.eps, "eps", verb)?;
            inputs["eps"] = json!(eps);
            Some(fricke_dual(&input(verb)?, &FrickeData::Eigenvalue(eps))?)
        }
        FormsVerb::Petersson | FormsVerb::Ramanujan => None,
    };
    let mut report = Report::new(format!("forms {verb}"), inputs);
    if let Some(f) = generated {
        if let Some(path) = &args.save {
            save_qexp(&f, path)?;
        }
        report.push(json!({ "qexp": json_text(&f.to_json())? }));
        return Ok(report);
    }
    let f = input(verb)?;
    if args.verb == FormsVerb::Ramanujan {
        let holds = ramanujan_bound_holds(&f, 1e-12);
        report.require(holds);
        report.push(json!({ "label": f.label, "coefficients": f.n_max(), "bound_holds": holds }));
        return Ok(report);
    }
    let g = load_form(required(&args.other, "other", verb)?)?;
    let p = petersson_numeric(&f, &g, cfg.tolerance.max(1e-12))?;
    report.residual(p.error, p.value.norm(), cfg.tolerance);
    report.push(json!({ "value": c64_json(p.value), "error": p.error }));
    Ok(report)
}
