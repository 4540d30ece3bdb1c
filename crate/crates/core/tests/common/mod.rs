//! Test-only helpers: an independent EL⊥ model checker over unnormalized
//! concepts and proptest strategies for small random KBs.
#![allow(dead_code)]

use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

/// Concepts for the oracle; `Or` is only meaningful on left-hand sides.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OConcept {
    Top,
    Bottom,
    Name(String),
    And(Vec<OConcept>),
    Some(String, Box<OConcept>),
    Or(Vec<OConcept>),
}

impl OConcept {
    pub fn render(&self) -> String {
        match self {
            OConcept::Top => "Top".into(),
            OConcept::Bottom => "Bottom".into(),
            OConcept::Name(n) => n.clone(),
            OConcept::And(cs) => format!("and({})", join(cs)),
            OConcept::Or(cs) => format!("or({})", join(cs)),
            OConcept::Some(r, c) => format!("some({r} {})", c.render()),
        }
    }
}

fn join(cs: &[OConcept]) -> String {
    cs.iter().map(OConcept::render).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, Default)]
pub struct OKb {
    pub gcis: Vec<(OConcept, OConcept)>,
    pub classes: Vec<(String, String)>,
    pub roles: Vec<(String, String, String)>,
}

impl OKb {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (l, r) in &self.gcis {
            out.push_str(&format!("SubClassOf({} {})\n", l.render(), r.render()));
        }
        for (c, a) in &self.classes {
            out.push_str(&format!("ClassAssertion({c} {a})\n"));
        }
        for (r, a, b) in &self.roles {
            out.push_str(&format!("PropertyAssertion({r} {a} {b})\n"));
        }
        out
    }
}

#[derive(Default)]
struct Element {
    names: BTreeSet<String>,
    edges: BTreeSet<(String, usize)>,
    bottom: bool,
}

/// The least model of the KB in which every right-hand existential `∃r.D`
/// is witnessed by one shared element per filler `D`.
pub struct Model {
    elements: Vec<Element>,
    individuals: BTreeMap<String, usize>,
    witnesses: BTreeMap<OConcept, usize>,
}

impl Model {
    pub fn build(kb: &OKb) -> Model {
        let mut model = Model {
            elements: Vec::new(),
            individuals: BTreeMap::new(),
            witnesses: BTreeMap::new(),
        };
        model.witness(&OConcept::Top);
        for (c, a) in &kb.classes {
            let x = model.individual(a);
            model.elements[x].names.insert(c.clone());
        }
        for (r, a, b) in &kb.roles {
            let x = model.individual(a);
            let y = model.individual(b);
            model.elements[x].edges.insert((r.clone(), y));
        }
        loop {
            let mut changed = false;
            for x in 0..model.elements.len() {
                for (lhs, rhs) in &kb.gcis {
                    if model.holds(x, lhs) {
                        changed |= model.enforce(x, rhs);
                    }
                }
            }
            if !changed {
                return model;
            }
        }
    }

    fn individual(&mut self, name: &str) -> usize {
        if let Some(&x) = self.individuals.get(name) {
            return x;
        }
        self.elements.push(Element::default());
        let x = self.elements.len() - 1;
        self.individuals.insert(name.to_string(), x);
        x
    }

    fn witness(&mut self, filler: &OConcept) -> usize {
        if let Some(&x) = self.witnesses.get(filler) {
            return x;
        }
        self.elements.push(Element::default());
        let x = self.elements.len() - 1;
        self.witnesses.insert(filler.clone(), x);
        self.enforce(x, filler);
        x
    }

    fn enforce(&mut self, x: usize, concept: &OConcept) -> bool {
        match concept {
            OConcept::Top => false,
            OConcept::Bottom => !std::mem::replace(&mut self.elements[x].bottom, true),
            OConcept::Name(n) => self.elements[x].names.insert(n.clone()),
            OConcept::And(cs) => {
                let mut changed = false;
                for c in cs {
                    changed |= self.enforce(x, c);
                }
                changed
            }
            OConcept::Some(r, filler) => {
                let y = self.witness(filler);
                self.elements[x].edges.insert((r.clone(), y))
            }
            OConcept::Or(_) => panic!("disjunction on a right-hand side"),
        }
    }

    fn holds(&self, x: usize, concept: &OConcept) -> bool {
        let element = &self.elements[x];
        element.bottom
            || match concept {
                OConcept::Top => true,
                OConcept::Bottom => false,
                OConcept::Name(n) => element.names.contains(n),
                OConcept::And(cs) => cs.iter().all(|c| self.holds(x, c)),
                OConcept::Or(cs) => cs.iter().any(|c| self.holds(x, c)),
                OConcept::Some(r, c) => {
                    element.edges.iter().any(|(s, y)| s == r && self.holds(*y, c))
                }
            }
    }

    fn reaches_bottom(&self, start: usize) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            if !seen.insert(x) {
                continue;
            }
            if self.elements[x].bottom {
                return true;
            }
            stack.extend(self.elements[x].edges.iter().map(|(_, y)| *y));
        }
        false
    }

    pub fn inconsistent(&self) -> bool {
        self.reaches_bottom(self.witnesses[&OConcept::Top])
            || self.individuals.values().any(|&x| self.reaches_bottom(x))
    }

    /// `K ⊨ C(a)`; individuals that do not occur behave like a fresh element.
    pub fn instance(&self, concept: &OConcept, individual: &str) -> bool {
        if self.inconsistent() {
            return true;
        }
        let x = self
            .individuals
            .get(individual)
            .copied()
            .unwrap_or(self.witnesses[&OConcept::Top]);
        self.holds(x, concept)
    }
}

pub const NAMES: &[&str] = &["A", "B", "C", "D"];
pub const ROLES: &[&str] = &["r", "s"];
pub const INDIVIDUALS: &[&str] = &["a", "b", "c"];

pub fn concept(depth: u32, allow_bottom: bool) -> BoxedStrategy<OConcept> {
    let mut leaf = vec![
        (1, Just(OConcept::Top).boxed()),
        (6, prop::sample::select(NAMES).prop_map(|n| OConcept::Name(n.into())).boxed()),
    ];
    if allow_bottom {
        leaf.push((1, Just(OConcept::Bottom).boxed()));
    }
    let leaf = prop::strategy::Union::new_weighted(leaf).boxed();
    if depth == 0 {
        return leaf;
    }
    let inner = concept(depth - 1, allow_bottom);
    prop_oneof![
        3 => leaf,
        1 => prop::collection::vec(inner.clone(), 2..=3).prop_map(OConcept::And),
        2 => (prop::sample::select(ROLES), inner).prop_map(|(r, c)| OConcept::Some(r.into(), Box::new(c))),
    ]
    .boxed()
}

pub fn lhs_concept() -> BoxedStrategy<OConcept> {
    prop_oneof![
        4 => concept(2, false),
        1 => prop::collection::vec(concept(1, false), 2..=3).prop_map(OConcept::Or),
    ]
    .boxed()
}

pub fn kb(max_gcis: usize, max_assertions: usize, allow_bottom: bool) -> impl Strategy<Value = OKb> {
    let gci = (lhs_concept(), concept(2, allow_bottom));
    let class = (prop::sample::select(NAMES), prop::sample::select(INDIVIDUALS))
        .prop_map(|(c, a)| (c.to_string(), a.to_string()));
    let role = (
        prop::sample::select(ROLES),
        prop::sample::select(INDIVIDUALS),
        prop::sample::select(INDIVIDUALS),
    )
        .prop_map(|(r, a, b)| (r.to_string(), a.to_string(), b.to_string()));
    (
        prop::collection::vec(gci, 0..=max_gcis),
        prop::collection::vec(class, 0..=max_assertions),
        prop::collection::vec(role, 0..=max_assertions / 2),
    )
        .prop_map(|(gcis, classes, roles)| OKb { gcis, classes, roles })
}
