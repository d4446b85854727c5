use hoforms::group::{Gl2, GroupUniverse, Perm, Permutations};
use hoforms::hecke::models::{nonunimodular_example, permutation_pair, sl2z_pair, PermutationRep};
use hoforms::hecke::{
    hecke_apply_with_reps, subgroup_invariants, unitary_model_checks, HeckeClass, HeckePair, Side,
};
use hoforms::linalg::{vec_add, vec_scale, vec_sub};
use hoforms::{Subspace, Vector, QI};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::args::{HeckeArgs, HeckeCheck, SigmaChoice};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::Report;

pub fn run(args: &HeckeArgs, cfg: &RunConfig) -> Result<Report, CliError> {
    match args.check {
        HeckeCheck::Nonunimodular => nonunimodular(args),
        HeckeCheck::Unimodular => unimodular(args),
        HeckeCheck::Welldef => welldef(args, cfg),
        HeckeCheck::Adjoint | HeckeCheck::Norm => unitary(args, cfg),
    }
}

fn nonunimodular(args: &HeckeArgs) -> Result<Report, CliError> {
    let mut report = Report::new("hecke nonunimodular", json!({ "p": args.p }));
    let (left, right) = nonunimodular_example(args.p)?;
    report.require((left, right) == (args.p as usize, 1));
    report.push(json!({ "left_cosets": left, "right_cosets": right, "unimodular": left == right }));
    Ok(report)
}

fn unimodular(args: &HeckeArgs) -> Result<Report, CliError> {
    let g = match &args.g {
        Some(text) => Gl2::parse(text)?,
        None => Gl2::new(1, 0, 0, args.p as i64),
    };
    let pair = sl2z_pair(args.sigma_level)?;
    let inputs = json!({ "g": format!("{g:?}"), "p": args.p, "sigma_level": args.sigma_level });
    let mut report = Report::new("hecke unimodular", inputs);
    let left = pair.enumerate_gamma_cosets(&g, Side::Left)?.len();
    let right = pair.enumerate_gamma_cosets(&g, Side::Right)?.len();
    report.require(left == right);
    report.push(json!({ "left_cosets": left, "right_cosets": right, "unimodular": left == right }));
    Ok(report)
}

/// `Γ` fixes the last point of `{0, …, degree-1}`; `Σ` is its alternating
/// subgroup or trivial.
fn permutation_model(args: &HeckeArgs) -> Result<(HeckePair<Permutations>, Perm, String), CliError> {
    let n = args.degree;
    if !(3..=7).contains(&n) {
        return Err(CliError::Usage(format!("--degree must lie in 3..=7, got {n}")));
    }
    let m = (n - 1) as u8;
    let gamma = vec![vec![vec![0, 1]], vec![(0..m).collect()]];
    let sigma: Vec<Vec<Vec<u8>>> = match args.sigma {
        SigmaChoice::Alternating => (2..m).map(|i| vec![vec![0, 1, i]]).collect(),
        SigmaChoice::Trivial => Vec::new(),
    };
    let label = match args.sigma {
        SigmaChoice::Alternating => format!("A{}", n - 1),
        SigmaChoice::Trivial => "1".to_string(),
    };
    let pair = permutation_pair(n, &gamma, &sigma, &label)?;
    let text = args.g.clone().unwrap_or_else(|| format!("(0 {})", n - 1));
    let cycles = parse_cycles(&text, n)?;
    let refs: Vec<&[u8]> = cycles.iter().map(Vec::as_slice).collect();
    Ok((pair, Permutations { degree: n }.from_cycles(&refs), text))
}

/// Parses cycle notation such as `(0 4)(1 2)`; `()` is the identity.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Vec<Vec<u8>>, CliError> {
    let bad = || CliError::Parse(format!("bad cycle notation {text:?}"));
    let t = text.trim();
    if !t.starts_with('(') || !t.ends_with(')') {
        return Err(bad());
    }
    let mut out = Vec::new();
    for chunk in t[1..t.len() - 1].split(")(") {
        let cycle: Vec<u8> = chunk
            .split([' ', ','])
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u8>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        if cycle.iter().any(|&x| x as usize >= degree) {
            return Err(CliError::Parse(format!("cycle entry out of range for degree {degree}: {text:?}")));
        }
        let mut seen = cycle.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != cycle.len() {
            return Err(bad());
        }
        if cycle.len() > 1 {
            out.push(cycle);
        }
    }
    Ok(out)
}

fn random_vector_in(space: &Subspace, rng: &mut ChaCha8Rng) -> Vector {
    let mut v = vec![QI::zero(); space.ambient_dim()];
    for b in space.basis() {
        let coef = QI::from_frac(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        v = vec_add(&v, &vec_scale(b, &coef));
    }
    v
}

fn welldef(args: &HeckeArgs, cfg: &RunConfig) -> Result<Report, CliError> {
    let (pair, g, g_text) = permutation_model(args)?;
    let inputs = json!({
        "degree": args.degree, "g": g_text, "sigma": pair.sigma_label(), "q": args.q, "trials": args.trials,
    });
    let mut report = Report::new("hecke welldef", inputs);
    let rep = PermutationRep { degree: args.degree };
    let reps = pair.enumerate_cosets(&g, Side::Left)?.reps;
    let sigma = pair.sigma_elements()?;
    let target = pair.sigma_g_elements(&g)?;
    let space = subgroup_invariants(&rep, pair.sigma_generators(), args.q as isize)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut congruent = 0;
    for _ in 0..args.trials {
        let v = random_vector_in(&space, &mut rng);
        let class = HeckeClass::new(&pair, &rep, args.q, v)?;
        let base = hecke_apply_with_reps(&pair, &rep, &class, &reps, &target)?;
        let moved_reps: Vec<Perm> = reps
            .iter()
            .map(|h| pair.universe.mul(h, sigma.choose(&mut rng).expect("Σ contains the identity")))
            .collect();
        let moved = hecke_apply_with_reps(&pair, &rep, &class, &moved_reps, &target)?;
        if base.modulus.contains(&vec_sub(&moved.representative, &base.representative)) {
            congruent += 1;
        }
    }
    report.require(congruent == args.trials);
    report.push(json!({
        "cosets": reps.len(),
        "h_q_dim": space.dim(),
        "congruent": congruent,
        "trials": args.trials,
    }));
    Ok(report)
}

fn unitary(args: &HeckeArgs, cfg: &RunConfig) -> Result<Report, CliError> {
    let (pair, g, g_text) = permutation_model(args)?;
    let name = if args.check == HeckeCheck::Norm { "norm" } else { "adjoint" };
    let inputs = json!({ "degree": args.degree, "g": g_text, "sigma": pair.sigma_label(), "q": args.q });
    let mut report = Report::new(format!("hecke {name}"), inputs);
    let r = unitary_model_checks(&pair, &PermutationRep { degree: args.degree }, &g, args.q)?;
    if args.check == HeckeCheck::Norm {
        report.residual((r.operator_norm - r.norm_bound as f64).max(0.0), r.norm_bound as f64, cfg.tolerance);
    } else {
        report.residual(r.adjoint_residual, 1.0, cfg.tolerance);
        if r.symmetric_double_coset {
            report.require(r.self_adjoint == Some(true));
        }
    }
    report.push(serde_json::to_value(&r).map_err(|e| CliError::Parse(e.to_string()))?);
    Ok(report)
}
