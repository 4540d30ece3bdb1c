use super::{Atom, ContrastiveExplanation, Evidence};
use crate::kb::{Assertion, ConceptName, Individual, RoleName};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CeJsonError {
    #[error("malformed explanation JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("fresh individual `{0}` cannot occur in the conflict set")]
    FreshConflict(String),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum JsonAtom<T> {
    Class { name: String, arg: T },
    Role { name: String, args: [T; 2] },
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(untagged)]
enum JsonIndividual {
    Named(String),
    Fresh { fresh: u32 },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonCe {
    vars: Vec<String>,
    q_com: Vec<JsonAtom<String>>,
    q_diff: Vec<JsonAtom<String>>,
    fact_evidence: BTreeMap<String, JsonIndividual>,
    foil_evidence: BTreeMap<String, JsonIndividual>,
    conflict: Vec<JsonAtom<String>>,
}

fn atom_out(atom: &Atom) -> JsonAtom<String> {
    match atom {
        Atom::Class(name, x) => JsonAtom::Class { name: name.to_string(), arg: x.clone() },
        Atom::Role(name, x, y) => JsonAtom::Role { name: name.to_string(), args: [x.clone(), y.clone()] },
    }
}

fn atom_in(atom: JsonAtom<String>) -> Atom {
    match atom {
        JsonAtom::Class { name, arg } => Atom::Class(ConceptName::new(&name), arg),
        JsonAtom::Role { name, args: [x, y] } => Atom::Role(RoleName::new(&name), x, y),
    }
}

fn individual_out(individual: &Individual) -> JsonIndividual {
    match individual {
        Individual::Named(name) => JsonIndividual::Named(name.to_string()),
        Individual::Fresh(n) => JsonIndividual::Fresh { fresh: *n },
    }
}

fn individual_in(individual: JsonIndividual) -> Individual {
    match individual {
        JsonIndividual::Named(name) => Individual::named(&name),
        JsonIndividual::Fresh { fresh } => Individual::Fresh(fresh),
    }
}

fn evidence_out(evidence: &Evidence) -> BTreeMap<String, JsonIndividual> {
    evidence.iter().map(|(x, i)| (x.clone(), individual_out(i))).collect()
}

fn evidence_in(evidence: BTreeMap<String, JsonIndividual>) -> Evidence {
    evidence.into_iter().map(|(x, i)| (x, individual_in(i))).collect()
}

fn conflict_out(assertion: &Assertion) -> JsonAtom<String> {
    match assertion {
        Assertion::Class(name, a) => JsonAtom::Class { name: name.to_string(), arg: a.to_string() },
        Assertion::Role(name, a, b) => JsonAtom::Role { name: name.to_string(), args: [a.to_string(), b.to_string()] },
    }
}

fn conflict_in(atom: JsonAtom<String>) -> Result<Assertion, CeJsonError> {
    let named = |text: String| {
        if text.starts_with("_fresh:") {
            Err(CeJsonError::FreshConflict(text))
        } else {
            Ok(Individual::named(&text))
        }
    };
    Ok(match atom {
        JsonAtom::Class { name, arg } => Assertion::Class(ConceptName::new(&name), named(arg)?),
        JsonAtom::Role { name, args: [a, b] } => Assertion::Role(RoleName::new(&name), named(a)?, named(b)?),
    })
}

/// The explanation as a JSON value; keys of evidence maps are sorted.
pub fn ce_to_json(e: &ContrastiveExplanation) -> serde_json::Value {
    let json = JsonCe {
        vars: e.vars.clone(),
        q_com: e.q_com.iter().map(atom_out).collect(),
        q_diff: e.q_diff.iter().map(atom_out).collect(),
        fact_evidence: evidence_out(&e.fact_evidence),
        foil_evidence: evidence_out(&e.foil_evidence),
        conflict: e.conflict.iter().map(conflict_out).collect(),
    };
    serde_json::to_value(json).expect("explanations serialize")
}

pub fn ce_from_json(text: &str) -> Result<ContrastiveExplanation, CeJsonError> {
    let json: JsonCe = serde_json::from_str(text)?;
    Ok(ContrastiveExplanation {
        vars: json.vars,
        q_com: json.q_com.into_iter().map(atom_in).collect(),
        q_diff: json.q_diff.into_iter().map(atom_in).collect(),
        fact_evidence: evidence_in(json.fact_evidence),
        foil_evidence: evidence_in(json.foil_evidence),
        conflict: json.conflict.into_iter().map(conflict_in).collect::<Result<_, _>>()?,
    })
}
