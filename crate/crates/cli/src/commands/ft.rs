use hoforms::ft::{second_order_product, ExactSeries};
use serde_json::json;

use super::{json_text, read_input};
use crate::args::{FtArgs, FtVerb};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{c64_json, parse_complex_list, Report};

fn load(path: &std::path::Path) -> Result<ExactSeries, CliError> {
    Ok(ExactSeries::from_json(&read_input(path)?)?)
}

pub fn run(args: &FtArgs, _cfg: &RunConfig) -> Result<Report, CliError> {
    let f = load(&args.input)?;
    let mut inputs = json!({ "input": args.input.display().to_string(), "q": f.order(), "n_min": f.n_min(), "n_max": f.n_max() });
    match args.verb {
        FtVerb::Delta => {
            let mut report = Report::new("ft delta", inputs);
            report.push(json!({ "series": json_text(&f.delta().to_json())? }));
            Ok(report)
        }
        FtVerb::SolveDelta => {
            let v0 = match &args.v0 {
                Some(p) => load(p)?,
                None => ExactSeries::zero(0, f.n_min(), f.n_max()),
            };
            inputs["v0"] = json!(args.v0.as_ref().map(|p| p.display().to_string()));
            let mut report = Report::new("ft solve-delta", inputs);
            let g = f.solve_delta(&v0)?;
            let round_trip = g.delta().same_function(&f);
            report.require(round_trip);
            report.push(json!({ "series": json_text(&g.to_json())?, "round_trip": round_trip }));
            Ok(report)
        }
        FtVerb::Eval => {
            if args.z.is_empty() {
                return Err(CliError::Usage("eval needs --z".into()));
            }
            let points = parse_complex_list(&args.z)?;
            inputs["z"] = json!(args.z);
            let mut report = Report::new("ft eval", inputs);
            for z in points {
                let e = f.eval(z)?;
                report.push(json!({ "z": c64_json(z), "value": c64_json(e.value), "tail_bound": e.tail_bound }));
            }
            Ok(report)
        }
        FtVerb::Product => {
            let other = args.other.as_ref().ok_or_else(|| CliError::Usage("product needs --other".into()))?;
            let g = load(other)?;
            inputs["other"] = json!(other.display().to_string());
            let mut report = Report::new("ft product", inputs);
            report.push(json!({ "series": json_text(&second_order_product(&f, &g)?.to_json())? }));
            Ok(report)
        }
    }
}
