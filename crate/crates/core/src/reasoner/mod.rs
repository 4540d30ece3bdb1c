//! EL⊥ reasoning by saturation: consistency, instance checking for complex
//! concepts, and ABox materialization.

mod normalize;
mod saturate;

pub use normalize::{AtomId, AtomLabel, Definition, NormalRule, NormalizedTBox, RoleId, BOTTOM, TOP};
pub use saturate::{saturate_with, SaturationState};

use crate::kb::{Assertion, Concept, ConceptName, Gci, KnowledgeBase};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("the knowledge base is inconsistent")]
    InconsistentKB,
}

/// Saturates the whole KB, classifying every concept name of the TBox.
pub fn saturate(kb: &KnowledgeBase) -> SaturationState {
    let tbox = NormalizedTBox::new(&kb.tbox);
    saturate_with(&tbox, &kb.abox, true)
}

pub fn is_consistent(kb: &KnowledgeBase) -> bool {
    !Entailer::new(&kb.tbox).saturate(&kb.abox).is_inconsistent()
}

/// `K ⊨ α`. A role assertion is entailed iff it is asserted or `K` is
/// inconsistent, since there are no role axioms.
pub fn entails_assertion(kb: &KnowledgeBase, assertion: &Assertion) -> bool {
    Entailer::new(&kb.tbox).entails(&kb.abox, assertion)
}

/// `K ⊨ C(a)` for an arbitrary EL⊥ concept `C`.
pub fn instance_check(kb: &KnowledgeBase, concept: &Concept, individual: &crate::kb::Individual) -> bool {
    let mut entailer = Entailer::new(&kb.tbox);
    let query = entailer.query(concept);
    entailer.saturate(&kb.abox).has_atom(individual, query)
}

/// The ABox extended with every entailed concept assertion `A(a)` where `A`
/// occurs in the KB and `a` in the ABox. Role assertions are only entailed
/// when asserted, so none are added.
pub fn materialize(kb: &KnowledgeBase) -> Result<BTreeSet<Assertion>, ReasonerError> {
    materialize_with(kb, &BTreeSet::new())
}

/// As [`materialize`], additionally admitting the names in `extra` (the
/// signature of a query concept).
pub fn materialize_with(
    kb: &KnowledgeBase,
    extra: &BTreeSet<ConceptName>,
) -> Result<BTreeSet<Assertion>, ReasonerError> {
    let state = Entailer::new(&kb.tbox).saturate(&kb.abox);
    if state.is_inconsistent() {
        return Err(ReasonerError::InconsistentKB);
    }
    let mut signature = kb.signature().concepts;
    signature.extend(extra.iter().cloned());
    let mut abox = kb.abox.clone();
    for (individual, name) in state.instance_facts() {
        if signature.contains(&name) {
            abox.insert(Assertion::Class(name, individual));
        }
    }
    Ok(abox)
}

/// A normalized TBox together with atoms for registered query concepts, reused
/// across saturations of different ABoxes.
#[derive(Clone, Debug)]
pub struct Entailer {
    tbox: NormalizedTBox,
}

impl Entailer {
    pub fn new<'a, I: IntoIterator<Item = &'a Gci>>(tbox: I) -> Self {
        Entailer { tbox: NormalizedTBox::new(tbox) }
    }

    /// Registers `concept` and returns the atom that marks its instances.
    pub fn query(&mut self, concept: &Concept) -> AtomId {
        self.tbox.define_query(concept)
    }

    pub fn tbox(&self) -> &NormalizedTBox {
        &self.tbox
    }

    pub fn saturate<'a, I: IntoIterator<Item = &'a Assertion>>(&self, abox: I) -> SaturationState {
        saturate_with(&self.tbox, abox, false)
    }

    pub fn entails<'a, I: IntoIterator<Item = &'a Assertion>>(&self, abox: I, assertion: &Assertion) -> bool {
        let abox: Vec<&Assertion> = abox.into_iter().collect();
        if let Assertion::Role(..) = assertion {
            if abox.contains(&assertion) {
                return true;
            }
        }
        self.saturate(abox).entails(assertion)
    }
}
