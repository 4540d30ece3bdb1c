use super::normalize::{AtomId, AtomLabel, NormalRule, NormalizedTBox, RoleId, BOTTOM, TOP};
use crate::kb::{Assertion, ConceptName, Individual, RoleName};
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn with_capacity(bits: usize) -> Self {
        BitSet(vec![0; bits.div_ceil(64)])
    }

    fn contains(&self, bit: AtomId) -> bool {
        let (word, offset) = (bit as usize / 64, bit % 64);
        self.0.get(word).is_some_and(|w| w & (1 << offset) != 0)
    }

    fn insert(&mut self, bit: AtomId) -> bool {
        let (word, offset) = (bit as usize / 64, bit % 64);
        if word >= self.0.len() {
            self.0.resize(word + 1, 0);
        }
        let fresh = self.0[word] & (1 << offset) == 0;
        self.0[word] |= 1 << offset;
        fresh
    }

    fn iter(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &word)| {
            (0..64).filter(move |b| word & (1u64 << b) != 0).map(move |b| (i * 64 + b) as AtomId)
        })
    }
}

enum Work {
    Type(u32, AtomId),
    Link(u32, RoleId, u32),
}

/// Fixpoint of the EL⊥ completion rules over a normalized TBox and an ABox.
///
/// Elements are the ABox individuals followed by one anonymous element per
/// existential filler (and, when classifying, per concept name). The anonymous
/// element for `B` carries exactly the atoms `X` with `T ⊨ B ⊑ X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationState {
    individuals: Vec<Individual>,
    individual_index: HashMap<Individual, u32>,
    types: Vec<BitSet>,
    anon: HashMap<AtomId, u32>,
    links: BTreeSet<(u32, RoleId, u32)>,
    asserted_roles: BTreeSet<Assertion>,
    labels: Vec<AtomLabel>,
    names: HashMap<ConceptName, AtomId>,
    inconsistent: bool,
}

struct Engine<'t> {
    tbox: &'t NormalizedTBox,
    types: Vec<BitSet>,
    preds: Vec<Vec<(RoleId, u32)>>,
    links: HashSet<(u32, RoleId, u32)>,
    anon: HashMap<AtomId, u32>,
    queue: VecDeque<Work>,
    atoms: usize,
}

impl Engine<'_> {
    fn add_type(&mut self, element: u32, atom: AtomId) {
        if self.types[element as usize].insert(atom) {
            self.queue.push_back(Work::Type(element, atom));
        }
    }

    fn element(&mut self) -> u32 {
        let id = self.types.len() as u32;
        self.types.push(BitSet::with_capacity(self.atoms));
        self.preds.push(Vec::new());
        id
    }

    fn anonymous(&mut self, filler: AtomId) -> u32 {
        if let Some(&id) = self.anon.get(&filler) {
            return id;
        }
        let id = self.element();
        self.anon.insert(filler, id);
        self.add_type(id, TOP);
        self.add_type(id, filler);
        id
    }

    fn add_link(&mut self, source: u32, role: RoleId, target: u32) {
        if self.links.insert((source, role, target)) {
            self.preds[target as usize].push((role, source));
            self.queue.push_back(Work::Link(source, role, target));
        }
    }

    fn left_rules(&self, role: RoleId) -> &[(AtomId, AtomId)] {
        self.tbox.left_by_role.get(role as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    fn run(&mut self) {
        while let Some(work) = self.queue.pop_front() {
            match work {
                Work::Type(element, atom) => {
                    if let Some(rules) = self.tbox.conj_by_atom.get(atom as usize) {
                        for &index in rules {
                            if let NormalRule::Conj(lhs, target) = &self.tbox.rules[index] {
                                let ty = &self.types[element as usize];
                                if lhs.iter().all(|a| ty.contains(*a)) {
                                    self.add_type(element, *target);
                                }
                            }
                        }
                    }
                    if let Some(rights) = self.tbox.right_by_atom.get(atom as usize) {
                        for &(role, filler) in rights {
                            let target = self.anonymous(filler);
                            self.add_link(element, role, target);
                        }
                    }
                    let preds = self.preds[element as usize].clone();
                    for (role, source) in preds {
                        if atom == BOTTOM {
                            self.add_type(source, BOTTOM);
                        }
                        let fires: Vec<AtomId> = self
                            .left_rules(role)
                            .iter()
                            .filter(|(filler, _)| *filler == atom)
                            .map(|(_, target)| *target)
                            .collect();
                        for target in fires {
                            self.add_type(source, target);
                        }
                    }
                }
                Work::Link(source, role, target) => {
                    if self.types[target as usize].contains(BOTTOM) {
                        self.add_type(source, BOTTOM);
                    }
                    let fires: Vec<AtomId> = self
                        .left_rules(role)
                        .iter()
                        .filter(|(filler, _)| self.types[target as usize].contains(*filler))
                        .map(|(_, t)| *t)
                        .collect();
                    for t in fires {
                        self.add_type(source, t);
                    }
                }
            }
        }
    }
}

/// Saturates `abox` against `tbox`. With `classify`, an anonymous element is
/// also created for every concept name so that all named subsumptions are
/// available through [`SaturationState::subsumptions`].
pub fn saturate_with<'a, I>(tbox: &NormalizedTBox, abox: I, classify: bool) -> SaturationState
where
    I: IntoIterator<Item = &'a Assertion>,
{
    let mut names: HashMap<ConceptName, AtomId> =
        tbox.concept_names().map(|(id, name)| (name.clone(), id)).collect();
    let mut labels = tbox.labels.clone();
    let assertions: Vec<&Assertion> = abox.into_iter().collect();

    let mut individuals = Vec::new();
    let mut individual_index = HashMap::new();
    for assertion in &assertions {
        for individual in assertion.individuals() {
            if !individual_index.contains_key(individual) {
                individual_index.insert(individual.clone(), individuals.len() as u32);
                individuals.push(individual.clone());
            }
        }
        if let Assertion::Class(name, _) = assertion {
            if !names.contains_key(name) {
                names.insert(name.clone(), labels.len() as AtomId);
                labels.push(AtomLabel::Name(name.clone()));
            }
        }
    }

    let mut engine = Engine {
        tbox,
        types: Vec::new(),
        preds: Vec::new(),
        links: HashSet::new(),
        anon: HashMap::new(),
        queue: VecDeque::new(),
        atoms: labels.len(),
    };
    for _ in &individuals {
        let element = engine.element();
        engine.add_type(element, TOP);
    }
    engine.anonymous(TOP);
    if classify {
        for (id, _) in tbox.concept_names() {
            engine.anonymous(id);
        }
    }

    let mut asserted_roles = BTreeSet::new();
    // Roles that never occur in the TBox get ids past the TBox's role table;
    // no rule mentions them, so they only need to be distinct.
    let mut extra_roles: HashMap<&RoleName, RoleId> = HashMap::new();
    for assertion in &assertions {
        match assertion {
            Assertion::Class(name, a) => {
                let element = individual_index[a];
                engine.add_type(element, names[name]);
            }
            Assertion::Role(role, a, b) => {
                asserted_roles.insert((*assertion).clone());
                let next = (tbox.roles.len() + extra_roles.len()) as RoleId;
                let role_id = tbox
                    .role_of(role)
                    .unwrap_or_else(|| *extra_roles.entry(role).or_insert(next));
                engine.add_link(individual_index[a], role_id, individual_index[b]);
            }
        }
    }
    engine.run();

    let inconsistent = engine.types[engine.anon[&TOP] as usize].contains(BOTTOM)
        || (0..individuals.len()).any(|i| engine.types[i].contains(BOTTOM));
    SaturationState {
        individuals,
        individual_index,
        types: engine.types,
        anon: engine.anon,
        links: engine.links.into_iter().collect(),
        asserted_roles,
        labels,
        names,
        inconsistent,
    }
}

impl SaturationState {
    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    fn element_types(&self, individual: &Individual) -> &BitSet {
        match self.individual_index.get(individual) {
            Some(&element) => &self.types[element as usize],
            // An individual that does not occur behaves like an arbitrary element.
            None => &self.types[self.anon[&TOP] as usize],
        }
    }

    /// Whether `individual` is derived to carry `atom`; always true when the
    /// KB is inconsistent.
    pub fn has_atom(&self, individual: &Individual, atom: AtomId) -> bool {
        self.inconsistent || self.element_types(individual).contains(atom)
    }

    pub fn entails(&self, assertion: &Assertion) -> bool {
        if self.inconsistent {
            return true;
        }
        match assertion {
            Assertion::Class(name, a) => match self.names.get(name) {
                Some(&atom) => self.element_types(a).contains(atom),
                None => false,
            },
            Assertion::Role(..) => self.asserted_roles.contains(assertion),
        }
    }

    /// Individuals of the saturated ABox, in first-occurrence order.
    pub fn individuals(&self) -> &[Individual] {
        &self.individuals
    }

    /// Concept names derived for `individual`.
    pub fn concept_names_of(&self, individual: &Individual) -> BTreeSet<ConceptName> {
        self.element_types(individual)
            .iter()
            .filter_map(|atom| match &self.labels[atom as usize] {
                AtomLabel::Name(name) => Some(name.clone()),
                _ => None,
            })
            .collect()
    }

    /// All `(individual, concept name)` facts.
    pub fn instance_facts(&self) -> BTreeSet<(Individual, ConceptName)> {
        self.individuals
            .iter()
            .flat_map(|i| self.concept_names_of(i).into_iter().map(move |n| (i.clone(), n)))
            .collect()
    }

    /// Named subsumptions `A ⊑ B` among the concept names that have an
    /// anonymous element (all of them after a classifying saturation).
    pub fn subsumptions(&self) -> BTreeSet<(ConceptName, ConceptName)> {
        let mut out = BTreeSet::new();
        for (&atom, &element) in &self.anon {
            let AtomLabel::Name(sub) = &self.labels[atom as usize] else { continue };
            let unsatisfiable = self.types[element as usize].contains(BOTTOM);
            for (sup_name, &sup) in &self.names {
                if unsatisfiable || self.types[element as usize].contains(sup) {
                    out.insert((sub.clone(), sup_name.clone()));
                }
            }
        }
        out
    }

    /// Number of derived links, including those to anonymous elements.
    pub fn link_count(&self) -> usize {
        self.links.len()
    }
}
