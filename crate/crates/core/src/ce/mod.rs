//! Contrastive problems and explanations: patterns over variables, their
//! instantiation, validation against the explanation conditions, and
//! homomorphisms between explanations.

mod homomorphism;
mod json;
mod render;
mod validate;

pub use homomorphism::{embeds, find_homomorphism, Homomorphism};
pub use json::{ce_from_json, ce_to_json, CeJsonError};
pub use render::render_text;
pub use validate::{classify_ce, validate_ce, CeKind, InvalidCe, ValidationReport, Validator};

use crate::kb::{Assertion, Concept, ConceptName, Individual, KnowledgeBase, RoleName};
use crate::reasoner::instance_check;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// A pattern atom `A(x)` or `r(x, y)` over variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    Class(ConceptName, String),
    Role(RoleName, String, String),
}

impl Atom {
    pub fn class(name: &str, var: &str) -> Self {
        Atom::Class(ConceptName::new(name), var.to_string())
    }

    pub fn role(name: &str, from: &str, to: &str) -> Self {
        Atom::Role(RoleName::new(name), from.to_string(), to.to_string())
    }

    pub fn vars(&self) -> impl Iterator<Item = &String> {
        let (first, second) = match self {
            Atom::Class(_, x) => (x, None),
            Atom::Role(_, x, y) => (x, Some(y)),
        };
        std::iter::once(first).chain(second)
    }

    /// `None` when the evidence does not cover a variable of the atom.
    pub fn instantiate(&self, evidence: &Evidence) -> Option<Assertion> {
        Some(match self {
            Atom::Class(name, x) => Assertion::Class(name.clone(), evidence.get(x)?.clone()),
            Atom::Role(name, x, y) => {
                Assertion::Role(name.clone(), evidence.get(x)?.clone(), evidence.get(y)?.clone())
            }
        })
    }

    pub fn rename(&self, map: impl Fn(&str) -> String) -> Atom {
        match self {
            Atom::Class(name, x) => Atom::Class(name.clone(), map(x)),
            Atom::Role(name, x, y) => Atom::Role(name.clone(), map(x), map(y)),
        }
    }
}

impl std::fmt::Display for Atom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Atom::Class(name, x) => write!(f, "{name}({x})"),
            Atom::Role(name, x, y) => write!(f, "{name}({x}, {y})"),
        }
    }
}

/// An assignment of individuals (possibly fresh) to variables.
pub type Evidence = BTreeMap<String, Individual>;

/// A set of atoms over an ordered variable vector. The vector may contain
/// variables that no atom uses.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct AboxPattern {
    pub vars: Vec<String>,
    pub atoms: BTreeSet<Atom>,
}

/// `q(v⃗)`: the assertions obtained by substituting the evidence.
pub fn instantiate<'a, I: IntoIterator<Item = &'a Atom>>(atoms: I, evidence: &Evidence) -> BTreeSet<Assertion> {
    atoms.into_iter().filter_map(|atom| atom.instantiate(evidence)).collect()
}

/// `⟨K, C, a, b⟩` with `K ⊨ C(a)` and `K ⊭ C(b)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContrastiveProblem {
    pub kb: KnowledgeBase,
    pub concept: Concept,
    pub fact: Individual,
    pub foil: Individual,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("the fact {fact} is not an instance of {concept}")]
    FactNotInstance { fact: String, concept: String },
    #[error("the foil {foil} is an instance of {concept}")]
    FoilIsInstance { foil: String, concept: String },
}

impl ContrastiveProblem {
    pub fn new(kb: KnowledgeBase, concept: Concept, fact: Individual, foil: Individual) -> Result<Self, ProblemError> {
        let rendered = || crate::kb::render_concept(&concept);
        if !instance_check(&kb, &concept, &fact) {
            return Err(ProblemError::FactNotInstance { fact: fact.to_string(), concept: rendered() });
        }
        if instance_check(&kb, &concept, &foil) {
            return Err(ProblemError::FoilIsInstance { foil: foil.to_string(), concept: rendered() });
        }
        Ok(ContrastiveProblem { kb, concept, fact, foil })
    }

    /// Same problem over a different ABox; the invariants are not rechecked.
    pub fn with_abox(&self, abox: BTreeSet<Assertion>) -> Self {
        ContrastiveProblem {
            kb: self.kb.with_abox(abox),
            concept: self.concept.clone(),
            fact: self.fact.clone(),
            foil: self.foil.clone(),
        }
    }
}

/// `⟨q_com, q_diff, c⃗, d⃗, 𝒞⟩`; both patterns share `vars`.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct ContrastiveExplanation {
    pub vars: Vec<String>,
    pub q_com: BTreeSet<Atom>,
    pub q_diff: BTreeSet<Atom>,
    pub fact_evidence: Evidence,
    pub foil_evidence: Evidence,
    pub conflict: BTreeSet<Assertion>,
}

impl ContrastiveExplanation {
    pub fn commonality(&self) -> AboxPattern {
        AboxPattern { vars: self.vars.clone(), atoms: self.q_com.clone() }
    }

    pub fn difference(&self) -> AboxPattern {
        AboxPattern { vars: self.vars.clone(), atoms: self.q_diff.clone() }
    }

    /// `q = q_com ∪ q_diff`.
    pub fn pattern(&self) -> BTreeSet<Atom> {
        self.q_com.union(&self.q_diff).cloned().collect()
    }

    pub fn fact_instance(&self) -> BTreeSet<Assertion> {
        instantiate(self.q_com.iter().chain(&self.q_diff), &self.fact_evidence)
    }

    pub fn foil_instance(&self) -> BTreeSet<Assertion> {
        instantiate(self.q_com.iter().chain(&self.q_diff), &self.foil_evidence)
    }

    /// `|q_com(d⃗)|`.
    pub fn commonality_size(&self) -> usize {
        instantiate(&self.q_com, &self.foil_evidence).len()
    }

    /// `|q_diff(d⃗)|`.
    pub fn difference_size(&self) -> usize {
        instantiate(&self.q_diff, &self.foil_evidence).len()
    }

    /// Distinct fresh individuals used by the foil evidence of used variables.
    pub fn fresh_count(&self) -> usize {
        let used: BTreeSet<&String> = self.pattern_vars();
        self.foil_evidence
            .iter()
            .filter(|(x, i)| used.contains(x) && i.is_fresh())
            .map(|(_, i)| i)
            .collect::<BTreeSet<_>>()
            .len()
    }

    fn pattern_vars(&self) -> BTreeSet<&String> {
        self.q_com.iter().chain(&self.q_diff).flat_map(Atom::vars).collect()
    }

    /// Drops variables that no atom mentions.
    pub fn prune_unused(&mut self) {
        let used: BTreeSet<String> = self.pattern_vars().into_iter().cloned().collect();
        self.vars.retain(|x| used.contains(x));
        self.fact_evidence.retain(|x, _| used.contains(x));
        self.foil_evidence.retain(|x, _| used.contains(x));
    }

    /// Renames variables to `x0, x1, …` in order of their first appearance in
    /// `vars`, and fresh individuals to `_fresh:0, …` in order of use.
    pub fn normalize_names(&mut self) {
        let renaming: BTreeMap<String, String> =
            self.vars.iter().enumerate().map(|(i, x)| (x.clone(), format!("x{i}"))).collect();
        let map = |x: &str| renaming.get(x).cloned().unwrap_or_else(|| x.to_string());
        self.q_com = self.q_com.iter().map(|a| a.rename(map)).collect();
        self.q_diff = self.q_diff.iter().map(|a| a.rename(map)).collect();
        let mut fresh: BTreeMap<u32, u32> = BTreeMap::new();
        for x in &self.vars {
            if let Some(Individual::Fresh(n)) = self.foil_evidence.get(x) {
                let next = fresh.len() as u32;
                fresh.entry(*n).or_insert(next);
            }
        }
        let relabel = |i: &Individual| match i {
            Individual::Fresh(n) => Individual::Fresh(fresh.get(n).copied().unwrap_or(*n)),
            named => named.clone(),
        };
        self.fact_evidence = self.fact_evidence.iter().map(|(x, i)| (map(x), relabel(i))).collect();
        self.foil_evidence = self.foil_evidence.iter().map(|(x, i)| (map(x), relabel(i))).collect();
        self.vars = self.vars.iter().map(|x| map(x)).collect();
    }
}
