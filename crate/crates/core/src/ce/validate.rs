use super::{instantiate, Atom, ContrastiveExplanation, ContrastiveProblem};
use crate::kb::Assertion;
use crate::reasoner::{AtomId, Entailer, SaturationState};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CeKind {
    /// `q_com(c⃗) ∪ q_diff(c⃗) ∪ q_com(d⃗) ⊆ A`.
    Syntactic,
    Semantic,
}

/// One verdict per condition. `d` is the extra requirement that no
/// difference assertion on the foil side already holds; it is kept apart
/// from C1–C5 so both notions of validity are available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// Every atom variable is declared and both evidences cover `vars`.
    pub well_formed: bool,
    pub c1_fact: bool,
    pub c1_foil: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
    pub c5: bool,
    pub d: bool,
    pub kind: CeKind,
    /// A pattern atom whose removal keeps the fact entailed, or one that
    /// collapses onto another atom under the fact evidence.
    pub c4_witness: Option<Atom>,
    /// A conflict element that can be put back without inconsistency, or an
    /// element outside the ABox.
    pub c5_witness: Option<Assertion>,
}

impl ValidationReport {
    pub fn c1(&self) -> bool {
        self.c1_fact && self.c1_foil
    }

    /// C1–C3: a candidate explanation.
    pub fn is_candidate(&self) -> bool {
        self.well_formed && self.c1() && self.c2 && self.c3
    }

    /// C1–C5.
    pub fn satisfies_definition(&self) -> bool {
        self.is_candidate() && self.c4 && self.c5
    }

    /// C1–C5 and `d`.
    pub fn is_valid(&self) -> bool {
        self.satisfies_definition() && self.d
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let checks = [
            (self.well_formed, "well-formed"),
            (self.c1_fact, "C1 (fact)"),
            (self.c1_foil, "C1 (foil)"),
            (self.c2, "C2"),
            (self.c3, "C3"),
            (self.c4, "C4"),
            (self.c5, "C5"),
            (self.d, "D"),
        ];
        checks.iter().filter(|(ok, _)| !ok).map(|(_, name)| *name).collect()
    }
}

/// Validation context for one problem: the normalized TBox with the query
/// concept registered, the saturated KB and its materialization.
pub struct Validator<'p> {
    problem: &'p ContrastiveProblem,
    entailer: Entailer,
    query: AtomId,
    kb_state: SaturationState,
    materialized: BTreeSet<Assertion>,
}

impl<'p> Validator<'p> {
    pub fn new(problem: &'p ContrastiveProblem) -> Self {
        let mut entailer = Entailer::new(&problem.kb.tbox);
        let query = entailer.query(&problem.concept);
        let kb_state = entailer.saturate(&problem.kb.abox);
        let mut signature = BTreeSet::new();
        problem.concept.concept_names(&mut signature);
        let materialized = crate::reasoner::materialize_with(&problem.kb, &signature)
            .unwrap_or_else(|_| problem.kb.abox.clone());
        Validator { problem, entailer, query, kb_state, materialized }
    }

    pub fn problem(&self) -> &ContrastiveProblem {
        self.problem
    }

    pub fn entailer(&self) -> &Entailer {
        &self.entailer
    }

    /// The atom marking instances of the problem's concept.
    pub fn query(&self) -> AtomId {
        self.query
    }

    /// `A_e`: the ABox with all entailed concept assertions over the input
    /// signature, including the names of the query concept.
    pub fn materialized(&self) -> &BTreeSet<Assertion> {
        &self.materialized
    }

    /// `T, abox ⊨ C(individual)`.
    pub fn entails_concept<'a, I>(&self, abox: I, individual: &crate::kb::Individual) -> bool
    where
        I: IntoIterator<Item = &'a Assertion>,
    {
        self.entailer.saturate(abox).has_atom(individual, self.query)
    }

    pub fn consistent<'a, I: IntoIterator<Item = &'a Assertion>>(&self, abox: I) -> bool {
        !self.entailer.saturate(abox).is_inconsistent()
    }

    pub fn kb_consistent(&self) -> bool {
        !self.kb_state.is_inconsistent()
    }

    pub fn kb_entails(&self, assertion: &Assertion) -> bool {
        self.kb_state.entails(assertion)
    }

    pub fn classify(&self, e: &ContrastiveExplanation) -> CeKind {
        let abox = &self.problem.kb.abox;
        let syntactic = e.fact_instance().is_subset(abox) && instantiate(&e.q_com, &e.foil_evidence).is_subset(abox);
        if syntactic {
            CeKind::Syntactic
        } else {
            CeKind::Semantic
        }
    }

    pub fn validate(&self, e: &ContrastiveExplanation) -> ValidationReport {
        self.check(e, true)
    }

    /// Checks C1–C3 and `d` only; C4 and C5 are reported as failed.
    pub fn validate_candidate(&self, e: &ContrastiveExplanation) -> ValidationReport {
        self.check(e, false)
    }

    fn check(&self, e: &ContrastiveExplanation, full: bool) -> ValidationReport {
        let p = self.problem;
        let declared: BTreeSet<&String> = e.vars.iter().collect();
        let well_formed = e.q_com.iter().chain(&e.q_diff).flat_map(Atom::vars).all(|x| declared.contains(x))
            && e.vars.iter().all(|x| e.fact_evidence.contains_key(x) && e.foil_evidence.contains_key(x));

        let fact_side = e.fact_instance();
        let foil_side = e.foil_instance();
        let c1_fact = self.entails_concept(&fact_side, &p.fact);
        let c1_foil = self.entails_concept(&foil_side, &p.foil);
        let c2 = fact_side.iter().all(|a| self.kb_entails(a));
        let c3 = instantiate(&e.q_com, &e.foil_evidence).iter().all(|a| self.kb_entails(a));

        let kind = self.classify(e);
        let reference = match kind {
            CeKind::Syntactic => &p.kb.abox,
            CeKind::Semantic => &self.materialized,
        };
        let d = instantiate(&e.q_diff, &e.foil_evidence).is_disjoint(reference);

        let (mut c4, mut c4_witness, mut c5, mut c5_witness) = (false, None, false, None);
        if full {
            (c4, c4_witness) = self.check_c4(e, &fact_side, c1_fact && c2);
            (c5, c5_witness) = self.check_c5(e, &foil_side);
        }
        ValidationReport { well_formed, c1_fact, c1_foil, c2, c3, c4, c5, d, kind, c4_witness, c5_witness }
    }

    /// `q(c⃗)` is a justification of `C(a)`: pattern atoms map injectively and
    /// dropping any one of them loses the fact.
    fn check_c4(
        &self,
        e: &ContrastiveExplanation,
        fact_side: &BTreeSet<Assertion>,
        base: bool,
    ) -> (bool, Option<Atom>) {
        let mut seen: BTreeSet<Assertion> = BTreeSet::new();
        for atom in e.q_com.iter().chain(&e.q_diff) {
            if let Some(a) = atom.instantiate(&e.fact_evidence) {
                if !seen.insert(a) {
                    return (false, Some(atom.clone()));
                }
            }
        }
        if !base {
            return (false, None);
        }
        for atom in e.q_com.iter().chain(&e.q_diff) {
            let Some(instance) = atom.instantiate(&e.fact_evidence) else { continue };
            if self.entails_concept(fact_side.iter().filter(|a| **a != instance), &self.problem.fact) {
                return (false, Some(atom.clone()));
            }
        }
        (true, None)
    }

    /// `𝒞 ⊆ A` is ⊆-minimal with `T, (A \ 𝒞) ∪ q(d⃗)` consistent.
    fn check_c5(&self, e: &ContrastiveExplanation, foil_side: &BTreeSet<Assertion>) -> (bool, Option<Assertion>) {
        let abox = &self.problem.kb.abox;
        if let Some(outside) = e.conflict.iter().find(|a| !abox.contains(a)) {
            return (false, Some(outside.clone()));
        }
        let without = |removed: &dyn Fn(&Assertion) -> bool| {
            self.consistent(abox.iter().filter(|a| !removed(a)).chain(foil_side))
        };
        if !without(&|a| e.conflict.contains(a)) {
            return (false, None);
        }
        for gamma in &e.conflict {
            if without(&|a| a != gamma && e.conflict.contains(a)) {
                return (false, Some(gamma.clone()));
            }
        }
        (true, None)
    }
}

pub fn validate_ce(p: &ContrastiveProblem, e: &ContrastiveExplanation) -> ValidationReport {
    Validator::new(p).validate(e)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a valid explanation: {0}")]
pub struct InvalidCe(pub String);

pub fn classify_ce(p: &ContrastiveProblem, e: &ContrastiveExplanation) -> Result<CeKind, InvalidCe> {
    let validator = Validator::new(p);
    let report = validator.validate(e);
    if report.is_valid() {
        Ok(report.kind)
    } else {
        Err(InvalidCe(report.failures().join(", ")))
    }
}
