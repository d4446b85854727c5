use hoforms::invariants::{
    ideal_power_chain, invariant_filtration, no_higher_invariants_unitary_check, GroupKind, MatrixModule,
};
use hoforms::Subspace;
use serde_json::{json, Value};

use super::read_input;
use crate::args::{InvariantsArgs, InvariantsVerb};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::Report;

pub fn subspace_json(s: &Subspace) -> Value {
    let basis: Vec<Vec<String>> = s.basis().iter().map(|v| v.iter().map(ToString::to_string).collect()).collect();
    json!({ "dim": s.dim(), "basis": basis })
}

pub fn run(args: &InvariantsArgs, _cfg: &RunConfig) -> Result<Report, CliError> {
    let module = MatrixModule::from_json(&read_input(&args.module)?)?.with_q_max(args.q.max(3));
    let kind = match module.group_kind() {
        GroupKind::Finite => "finite",
        GroupKind::FinitelyGeneratedInfinite => "fg-infinite",
    };
    let inputs = json!({
        "module": args.module.display().to_string(),
        "dim": module.dim(),
        "group_kind": kind,
        "generators": module.generators().iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
        "q": args.q,
    });
    let mut report = Report::new(format!("invariants {}", verb_name(args.verb)), inputs);
    match args.verb {
        InvariantsVerb::Higher => {
            let filt = invariant_filtration(&module, args.q)?;
            report.push(json!({ "order": args.q, "subspace": subspace_json(&filt[args.q]) }));
        }
        InvariantsVerb::Lower => {
            let sub = if args.q == 0 {
                Subspace::zero(module.dim())
            } else {
                invariant_filtration(&module, args.q - 1)?.pop().expect("nonempty filtration")
            };
            report.push(json!({ "order": args.q as i64 - 1, "subspace": subspace_json(&sub) }));
        }
        InvariantsVerb::Filtration => {
            for (q, s) in invariant_filtration(&module, args.q)?.iter().enumerate() {
                report.push(json!({ "order": q, "subspace": subspace_json(s) }));
            }
        }
        InvariantsVerb::CheckOracle => {
            let filt = invariant_filtration(&module, args.q)?;
            let oracle = ideal_power_chain(&module, args.q)?;
            for (q, (a, b)) in filt.iter().zip(&oracle).enumerate() {
                let agree = a == b;
                report.require(agree);
                report.push(json!({ "order": q, "filtration_dim": a.dim(), "oracle_dim": b.dim(), "agree": agree }));
            }
        }
        InvariantsVerb::CheckUnitary => {
            let stable = no_higher_invariants_unitary_check(&module)?;
            report.require(stable);
            report.push(json!({ "h_q_equals_h_0": stable }));
        }
    }
    Ok(report)
}

fn verb_name(v: InvariantsVerb) -> &'static str {
    match v {
        InvariantsVerb::Higher => "higher",
        InvariantsVerb::Lower => "lower",
        InvariantsVerb::Filtration => "filtration",
        InvariantsVerb::CheckOracle => "check-oracle",
        InvariantsVerb::CheckUnitary => "check-unitary",
    }
}
