use std::sync::Arc;

use jtl_core::magnus::{mag, QuotientAlgebra};
use jtl_core::suites::run_suite;
use jtl_core::symplectic::{dehn_twist_derivation, h1_invariant_count, h_basis, symplectic_expansion};
use jtl_core::trees::{caterpillar_six, eta, eta_combination, xi_trees, Invariant, Tree};
use jtl_core::{Derivation, Rational};
use serde_json::{json, Value};

use crate::error::{input_error, CliError, CliResult};
use crate::json::{self, check_trunc};
use crate::Command;

/// A computed report body; `failure` marks a completed run that must still exit 1.
pub struct Outcome {
    pub inputs: Value,
    pub result: Value,
    pub failure: Option<CliError>,
}

fn done(inputs: Value, result: Value) -> CliResult<Outcome> {
    Ok(Outcome { inputs, result, failure: None })
}

/// Reads `-` as stdin, text starting with `{` or `[` as inline JSON, and anything else as a path.
fn load(source: &str) -> CliResult<Value> {
    let text = if source == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Io { path: "<stdin>".into(), source: e })?
    } else if source.trim_start().starts_with(['{', '[']) {
        source.to_string()
    } else {
        std::fs::read_to_string(source).map_err(|e| CliError::Io { path: source.into(), source: e })?
    };
    Ok(serde_json::from_str(&text)?)
}

fn require_genus(genus: usize) -> CliResult<()> {
    if !(1..=128).contains(&genus) {
        return input_error(format!("genus must lie in 1..=128, got {genus}"));
    }
    Ok(())
}

pub fn run(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::DimH { genus, degree } => {
            require_genus(*genus)?;
            if *degree == 0 {
                return input_error("degree must be at least 1");
            }
            check_trunc(degree + 2)?;
            let basis = h_basis::<Rational>(*genus, *degree, degree + 2)?;
            done(json!({ "genus": genus, "degree": degree }), json!({ "dim": basis.dim() }))
        }
        Command::H1Invariants { genus, degree } => {
            if *genus != 1 {
                return input_error("sl2-invariant counting is defined for genus 1 only");
            }
            check_trunc(degree + 2)?;
            let count = h1_invariant_count::<Rational>(*degree)?;
            done(json!({ "genus": genus, "degree": degree }), json!({ "multiplicity": count }))
        }
        Command::Trace { derivation } => {
            let d = json::parse_derivation(&load(derivation)?)?;
            done(json!({ "derivation": derivation }), json::cyclic(&d.trace()))
        }
        Command::Itr { derivation } => {
            let d = json::parse_derivation(&load(derivation)?)?;
            done(json!({ "derivation": derivation }), json::sym(&d.itr()?))
        }
        Command::Ab { aut } => {
            let psi = json::parse_automorphism(&load(aut)?)?;
            done(json!({ "aut": aut }), json::derivation(&psi.ab()?))
        }
        Command::Tau { aut, degree } => {
            let psi = json::parse_automorphism(&load(aut)?)?;
            done(json!({ "aut": aut, "degree": degree }), json::derivation(&psi.tau(*degree)?))
        }
        Command::Mag { aut, ideal } => {
            let psi = json::parse_automorphism(&load(aut)?)?;
            if psi.trunc() < 2 {
                return input_error("the automorphism needs truncation at least 2");
            }
            let algebra = Arc::new(QuotientAlgebra::new(psi.alphabet(), *ideal, psi.trunc() - 1)?);
            done(json!({ "aut": aut, "ideal": ideal }), json::rmatrix(&mag(&psi, &algebra)?))
        }
        Command::Ldet { matrix } => {
            let p = json::parse_rmatrix(&load(matrix)?)?;
            done(json!({ "matrix": matrix }), json::cyclic(&p.ldet()?))
        }
        Command::Det { matrix } => {
            let p = json::parse_rmatrix(&load(matrix)?)?;
            done(json!({ "matrix": matrix }), json::sym(&p.det_commutative()?))
        }
        Command::Expansion { genus, trunc } => {
            require_genus(*genus)?;
            check_trunc(*trunc)?;
            let theta = symplectic_expansion::<Rational>(*genus, *trunc)?;
            done(json!({ "genus": genus, "trunc": trunc }), json::expansion(&theta, *genus))
        }
        Command::EvalInvariant { name, tree } => {
            let invariant: Invariant = name.parse()?;
            let delta = invariant_input(tree, invariant.degree() + 2)?;
            let value = invariant.evaluate(&delta)?;
            done(json!({ "name": name, "tree": tree }), json!({ "value": json::rational(&value) }))
        }
        Command::Check { suite, trials, seed } => {
            let report = run_suite(suite, *trials, *seed)?;
            let failure = (!report.passed()).then(|| CliError::SuiteFailed {
                suite: report.suite.clone(),
                failed: report.failures.len(),
                trials: report.trials,
            });
            Ok(Outcome {
                inputs: json!({ "suite": suite, "trials": trials, "seed": seed }),
                result: json!({ "passed": report.passed(), "trials": report.trials, "failures": report.failures }),
                failure,
            })
        }
    }
}

fn builtin(name: &str, trunc: usize) -> CliResult<Derivation> {
    let tree = |t: &Tree| -> CliResult<Derivation> { Ok(eta(t, trunc)?) };
    match name {
        "dehn-twist" => Ok(dehn_twist_derivation(1, trunc)?),
        "caterpillar-6" => tree(&caterpillar_six()),
        "xi1" => tree(&xi_trees()[0]),
        "xi2" => tree(&xi_trees()[1]),
        "xi3" => tree(&xi_trees()[2]),
        _ => input_error(format!("unknown builtin `{name}` (expected dehn-twist, caterpillar-6, xi1, xi2 or xi3)")),
    }
}

/// A builtin, a tree, a list of `{"tree", "coeff"}` terms, or a derivation `{"images"}`.
fn invariant_input(source: &str, trunc: usize) -> CliResult<Derivation> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return builtin(name, trunc);
    }
    let v = load(source)?;
    if v.get("images").is_some() {
        return json::parse_derivation(&v);
    }
    if let Some(items) = v.as_array() {
        let mut terms = Vec::with_capacity(items.len());
        for item in items {
            let t = json::parse_tree(item.get("tree").ok_or_else(|| CliError::Input("missing field `tree`".into()))?)?;
            let c = item
                .get("coeff")
                .map(json::parse_rational)
                .transpose()?
                .unwrap_or_else(|| Rational::from_integer(1.into()));
            terms.push((t, c));
        }
        if terms.is_empty() {
            return input_error("empty tree combination");
        }
        let alphabet = terms[0].0.alphabet().clone();
        if terms.iter().any(|(t, _)| *t.alphabet() != alphabet) {
            return input_error("all trees in a combination must use the same genus");
        }
        return Ok(eta_combination(&terms, trunc)?);
    }
    Ok(eta(&json::parse_tree(&v)?, trunc)?)
}
