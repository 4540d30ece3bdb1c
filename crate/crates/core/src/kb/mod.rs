//! Knowledge-base data model: names, EL⊥ concepts, axioms and the
//! line-oriented text format used to persist them.

mod parse;
mod write;

pub use parse::{parse_assertion, parse_concept, parse_kb, ParseError};
pub use write::{render_assertion, render_concept, serialize_kb, SerializationError};

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(text: &str) -> Self {
                $name(Arc::from(text))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(text: &str) -> Self {
                $name::new(text)
            }
        }
    };
}

name_type!(
    /// A concept name. Equality and ordering are by source text.
    ConceptName
);
name_type!(
    /// A role name.
    RoleName
);

/// An individual. Parsed individuals are `Named`; `Fresh` individuals are
/// generated by explanation construction and never appear in a parsed KB.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Individual {
    Named(Arc<str>),
    Fresh(u32),
}

impl Individual {
    pub fn named(text: &str) -> Self {
        Individual::Named(Arc::from(text))
    }

    pub fn is_fresh(&self) -> bool {
        matches!(self, Individual::Fresh(_))
    }
}

impl fmt::Display for Individual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Individual::Named(name) => f.write_str(name),
            Individual::Fresh(index) => write!(f, "_fresh:{index}"),
        }
    }
}

impl fmt::Debug for Individual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<&str> for Individual {
    fn from(text: &str) -> Self {
        Individual::named(text)
    }
}

/// An EL⊥ concept in canonical form.
///
/// Build conjunctions through [`Concept::and`] so that the canonical-form
/// invariants hold: conjunctions are flat, sorted, duplicate-free and have at
/// least two children, none of which is `Top`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Concept {
    Top,
    Bottom,
    Atomic(ConceptName),
    Conjunction(Vec<Concept>),
    Existential(RoleName, Box<Concept>),
}

impl Concept {
    pub fn atomic(name: &str) -> Self {
        Concept::Atomic(ConceptName::new(name))
    }

    pub fn some(role: &str, filler: Concept) -> Self {
        Concept::Existential(RoleName::new(role), Box::new(filler))
    }

    /// Canonical conjunction of `parts`.
    pub fn and<I: IntoIterator<Item = Concept>>(parts: I) -> Self {
        let mut children = BTreeSet::new();
        for part in parts {
            match part {
                Concept::Top => {}
                Concept::Bottom => return Concept::Bottom,
                Concept::Conjunction(inner) => children.extend(inner),
                other => {
                    children.insert(other);
                }
            }
        }
        let mut children: Vec<Concept> = children.into_iter().collect();
        match children.len() {
            0 => Concept::Top,
            1 => children.pop().unwrap(),
            _ => Concept::Conjunction(children),
        }
    }

    /// Re-establishes the canonical form bottom-up.
    pub fn canonical(&self) -> Concept {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) => self.clone(),
            Concept::Conjunction(children) => Concept::and(children.iter().map(Concept::canonical)),
            Concept::Existential(role, filler) => {
                Concept::Existential(role.clone(), Box::new(filler.canonical()))
            }
        }
    }

    /// Tree size: 1 for `Top`, `Bottom` and names, `1 + size(C)` for `∃r.C`,
    /// and the sum of the children for a conjunction.
    pub fn size(&self) -> usize {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) => 1,
            Concept::Conjunction(children) => children.iter().map(Concept::size).sum(),
            Concept::Existential(_, filler) => 1 + filler.size(),
        }
    }

    pub fn concept_names(&self, out: &mut BTreeSet<ConceptName>) {
        match self {
            Concept::Top | Concept::Bottom => {}
            Concept::Atomic(name) => {
                out.insert(name.clone());
            }
            Concept::Conjunction(children) => children.iter().for_each(|c| c.concept_names(out)),
            Concept::Existential(_, filler) => filler.concept_names(out),
        }
    }

    pub fn role_names(&self, out: &mut BTreeSet<RoleName>) {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) => {}
            Concept::Conjunction(children) => children.iter().for_each(|c| c.role_names(out)),
            Concept::Existential(role, filler) => {
                out.insert(role.clone());
                filler.role_names(out);
            }
        }
    }
}

/// Tree size of a concept.
pub fn concept_size(concept: &Concept) -> usize {
    concept.size()
}

/// A general concept inclusion `lhs ⊑ rhs`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Gci {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl Gci {
    pub fn new(lhs: Concept, rhs: Concept) -> Self {
        Gci { lhs, rhs }
    }
}

/// A concept assertion `A(a)` or a role assertion `r(a, b)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Assertion {
    Class(ConceptName, Individual),
    Role(RoleName, Individual, Individual),
}

impl Assertion {
    pub fn class(concept: &str, individual: &str) -> Self {
        Assertion::Class(ConceptName::new(concept), Individual::named(individual))
    }

    pub fn role(role: &str, subject: &str, object: &str) -> Self {
        Assertion::Role(RoleName::new(role), Individual::named(subject), Individual::named(object))
    }

    pub fn individuals(&self) -> impl Iterator<Item = &Individual> {
        let (first, second) = match self {
            Assertion::Class(_, a) => (a, None),
            Assertion::Role(_, a, b) => (a, Some(b)),
        };
        std::iter::once(first).chain(second)
    }

    pub fn mentions_fresh(&self) -> bool {
        self.individuals().any(Individual::is_fresh)
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Class(name, a) => write!(f, "{name}({a})"),
            Assertion::Role(role, a, b) => write!(f, "{role}({a}, {b})"),
        }
    }
}

/// Any axiom of a knowledge base.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Axiom {
    Gci(Gci),
    Assertion(Assertion),
}

impl Axiom {
    pub fn as_assertion(&self) -> Option<&Assertion> {
        match self {
            Axiom::Assertion(assertion) => Some(assertion),
            Axiom::Gci(_) => None,
        }
    }
}

impl From<Gci> for Axiom {
    fn from(gci: Gci) -> Self {
        Axiom::Gci(gci)
    }
}

impl From<Assertion> for Axiom {
    fn from(assertion: Assertion) -> Self {
        Axiom::Assertion(assertion)
    }
}

/// Names occurring in a set of axioms.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Signature {
    pub concepts: BTreeSet<ConceptName>,
    pub roles: BTreeSet<RoleName>,
    pub individuals: BTreeSet<Individual>,
}

/// A knowledge base `⟨T, A⟩`.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct KnowledgeBase {
    pub tbox: BTreeSet<Gci>,
    pub abox: BTreeSet<Assertion>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts<G, A>(tbox: G, abox: A) -> Self
    where
        G: IntoIterator<Item = Gci>,
        A: IntoIterator<Item = Assertion>,
    {
        KnowledgeBase {
            tbox: tbox.into_iter().collect(),
            abox: abox.into_iter().collect(),
        }
    }

    /// Same TBox, different ABox.
    pub fn with_abox<A: IntoIterator<Item = Assertion>>(&self, abox: A) -> Self {
        KnowledgeBase {
            tbox: self.tbox.clone(),
            abox: abox.into_iter().collect(),
        }
    }

    pub fn add(&mut self, axiom: Axiom) {
        match axiom {
            Axiom::Gci(gci) => {
                self.tbox.insert(gci);
            }
            Axiom::Assertion(assertion) => {
                self.abox.insert(assertion);
            }
        }
    }

    /// All axioms, GCIs first, in canonical order.
    pub fn axioms(&self) -> impl Iterator<Item = Axiom> + '_ {
        self.tbox
            .iter()
            .cloned()
            .map(Axiom::Gci)
            .chain(self.abox.iter().cloned().map(Axiom::Assertion))
    }

    pub fn from_axioms<I: IntoIterator<Item = Axiom>>(axioms: I) -> Self {
        let mut kb = KnowledgeBase::new();
        for axiom in axioms {
            kb.add(axiom);
        }
        kb
    }

    pub fn len(&self) -> usize {
        self.tbox.len() + self.abox.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tbox.is_empty() && self.abox.is_empty()
    }

    /// Individuals occurring in the ABox, `NI(A)`.
    pub fn individuals(&self) -> BTreeSet<Individual> {
        self.abox.iter().flat_map(|a| a.individuals().cloned()).collect()
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for gci in &self.tbox {
            for concept in [&gci.lhs, &gci.rhs] {
                concept.concept_names(&mut sig.concepts);
                concept.role_names(&mut sig.roles);
            }
        }
        for assertion in &self.abox {
            match assertion {
                Assertion::Class(name, a) => {
                    sig.concepts.insert(name.clone());
                    sig.individuals.insert(a.clone());
                }
                Assertion::Role(role, a, b) => {
                    sig.roles.insert(role.clone());
                    sig.individuals.insert(a.clone());
                    sig.individuals.insert(b.clone());
                }
            }
        }
        sig
    }
}
