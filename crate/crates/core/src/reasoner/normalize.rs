use crate::kb::{Concept, ConceptName, Gci, RoleName};
use std::collections::HashMap;

pub type AtomId = u32;
pub type RoleId = u32;

pub const TOP: AtomId = 0;
pub const BOTTOM: AtomId = 1;

/// What an atom of the normalized TBox stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomLabel {
    Top,
    Bottom,
    Name(ConceptName),
    /// Introduced during normalization; the index points into `fresh_defs`.
    Introduced(usize),
}

/// A GCI in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalRule {
    /// `A1 ⊓ … ⊓ An ⊑ B`
    Conj(Vec<AtomId>, AtomId),
    /// `A ⊑ ∃r.B`
    ExistsRight(AtomId, RoleId, AtomId),
    /// `∃r.A ⊑ B`
    ExistsLeft(RoleId, AtomId, AtomId),
}

/// How an introduced name relates to the sub-concept it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Definition {
    /// `C ⊑ X`: the name over-approximates a left-hand-side sub-concept.
    Below(Concept),
    /// `X ⊑ C`: the name under-approximates a right-hand-side sub-concept.
    Above(Concept),
    /// `A1 ⊓ … ⊓ An ⊑ X`, used as the source of an existential on the right.
    Joined(Vec<AtomId>),
}

/// A TBox rewritten into the four EL⊥ normal forms, with rule indexes used by
/// the saturation engine. Names introduced here are fresh atoms; each one is
/// recorded once in `fresh_defs`.
#[derive(Clone, Debug)]
pub struct NormalizedTBox {
    pub(crate) labels: Vec<AtomLabel>,
    names: HashMap<ConceptName, AtomId>,
    pub(crate) roles: Vec<RoleName>,
    role_index: HashMap<RoleName, RoleId>,
    pub rules: Vec<NormalRule>,
    pub fresh_defs: Vec<(AtomId, Definition)>,
    below_cache: HashMap<Concept, AtomId>,
    above_cache: HashMap<Concept, AtomId>,
    // Indexes over `rules`.
    pub(crate) conj_by_atom: Vec<Vec<usize>>,
    pub(crate) right_by_atom: Vec<Vec<(RoleId, AtomId)>>,
    pub(crate) left_by_role: Vec<Vec<(AtomId, AtomId)>>,
    pub(crate) filler_atoms: Vec<AtomId>,
}

impl Default for NormalizedTBox {
    fn default() -> Self {
        NormalizedTBox {
            labels: vec![AtomLabel::Top, AtomLabel::Bottom],
            names: HashMap::new(),
            roles: Vec::new(),
            role_index: HashMap::new(),
            rules: Vec::new(),
            fresh_defs: Vec::new(),
            below_cache: HashMap::new(),
            above_cache: HashMap::new(),
            conj_by_atom: vec![Vec::new(), Vec::new()],
            right_by_atom: vec![Vec::new(), Vec::new()],
            left_by_role: Vec::new(),
            filler_atoms: Vec::new(),
        }
    }
}

impl NormalizedTBox {
    pub fn new<'a, I: IntoIterator<Item = &'a Gci>>(gcis: I) -> Self {
        let mut tbox = NormalizedTBox::default();
        for gci in gcis {
            tbox.add_gci(gci);
        }
        tbox
    }

    pub fn atom_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, atom: AtomId) -> &AtomLabel {
        &self.labels[atom as usize]
    }

    pub fn atom_of(&self, name: &ConceptName) -> Option<AtomId> {
        self.names.get(name).copied()
    }

    pub fn role_of(&self, role: &RoleName) -> Option<RoleId> {
        self.role_index.get(role).copied()
    }

    /// Named atoms, in id order.
    pub fn concept_names(&self) -> impl Iterator<Item = (AtomId, &ConceptName)> {
        self.labels.iter().enumerate().filter_map(|(id, label)| match label {
            AtomLabel::Name(name) => Some((id as AtomId, name)),
            _ => None,
        })
    }

    fn push_atom(&mut self, label: AtomLabel) -> AtomId {
        let id = self.labels.len() as AtomId;
        self.labels.push(label);
        self.conj_by_atom.push(Vec::new());
        self.right_by_atom.push(Vec::new());
        id
    }

    pub fn intern_name(&mut self, name: &ConceptName) -> AtomId {
        if let Some(&id) = self.names.get(name) {
            return id;
        }
        let id = self.push_atom(AtomLabel::Name(name.clone()));
        self.names.insert(name.clone(), id);
        id
    }

    pub fn intern_role(&mut self, role: &RoleName) -> RoleId {
        if let Some(&id) = self.role_index.get(role) {
            return id;
        }
        let id = self.roles.len() as RoleId;
        self.roles.push(role.clone());
        self.role_index.insert(role.clone(), id);
        self.left_by_role.push(Vec::new());
        id
    }

    fn introduce(&mut self, definition: Definition) -> AtomId {
        let id = self.push_atom(AtomLabel::Introduced(self.fresh_defs.len()));
        self.fresh_defs.push((id, definition));
        id
    }

    fn push_rule(&mut self, rule: NormalRule) {
        let index = self.rules.len();
        match &rule {
            NormalRule::Conj(lhs, _) => {
                let mut seen = lhs.clone();
                seen.sort_unstable();
                seen.dedup();
                for atom in seen {
                    self.conj_by_atom[atom as usize].push(index);
                }
            }
            NormalRule::ExistsRight(source, role, filler) => {
                self.right_by_atom[*source as usize].push((*role, *filler));
                if !self.filler_atoms.contains(filler) {
                    self.filler_atoms.push(*filler);
                }
            }
            NormalRule::ExistsLeft(role, filler, target) => {
                self.left_by_role[*role as usize].push((*filler, *target));
            }
        }
        self.rules.push(rule);
    }

    /// Conjunction of atoms that a left-hand-side concept unfolds to.
    fn lhs_atoms(&mut self, concept: &Concept, out: &mut Vec<AtomId>) {
        match concept {
            Concept::Top => out.push(TOP),
            Concept::Bottom => out.push(BOTTOM),
            Concept::Atomic(name) => out.push(self.intern_name(name)),
            Concept::Conjunction(children) => {
                for child in children {
                    self.lhs_atoms(child, out);
                }
            }
            Concept::Existential(..) => out.push(self.below(concept)),
        }
    }

    /// An atom `X` with `concept ⊑ X` derivable, introduced if needed.
    fn below(&mut self, concept: &Concept) -> AtomId {
        match concept {
            Concept::Top => return TOP,
            Concept::Bottom => return BOTTOM,
            Concept::Atomic(name) => return self.intern_name(name),
            _ => {}
        }
        if let Some(&id) = self.below_cache.get(concept) {
            return id;
        }
        let id = self.introduce(Definition::Below(concept.clone()));
        self.below_cache.insert(concept.clone(), id);
        match concept {
            Concept::Existential(role, filler) => {
                let role = self.intern_role(role);
                let filler = self.below(filler);
                self.push_rule(NormalRule::ExistsLeft(role, filler, id));
            }
            Concept::Conjunction(_) => {
                let mut atoms = Vec::new();
                self.lhs_atoms(concept, &mut atoms);
                self.push_rule(NormalRule::Conj(atoms, id));
            }
            _ => unreachable!(),
        }
        id
    }

    /// An atom `Y` with `Y ⊑ concept`, introduced if needed.
    fn above(&mut self, concept: &Concept) -> AtomId {
        match concept {
            Concept::Top => return TOP,
            Concept::Bottom => return BOTTOM,
            Concept::Atomic(name) => return self.intern_name(name),
            _ => {}
        }
        if let Some(&id) = self.above_cache.get(concept) {
            return id;
        }
        let id = self.introduce(Definition::Above(concept.clone()));
        self.above_cache.insert(concept.clone(), id);
        self.add_rhs(vec![id], concept);
        id
    }

    fn add_rhs(&mut self, lhs: Vec<AtomId>, rhs: &Concept) {
        match rhs {
            Concept::Top => {}
            Concept::Bottom => self.push_rule(NormalRule::Conj(lhs, BOTTOM)),
            Concept::Atomic(name) => {
                let target = self.intern_name(name);
                self.push_rule(NormalRule::Conj(lhs, target));
            }
            Concept::Conjunction(children) => {
                for child in children {
                    self.add_rhs(lhs.clone(), child);
                }
            }
            Concept::Existential(role, filler) => {
                let source = if let [single] = lhs.as_slice() {
                    *single
                } else {
                    let joined = self.introduce(Definition::Joined(lhs.clone()));
                    self.push_rule(NormalRule::Conj(lhs, joined));
                    joined
                };
                let role = self.intern_role(role);
                let filler = self.above(filler);
                self.push_rule(NormalRule::ExistsRight(source, role, filler));
            }
        }
    }

    pub fn add_gci(&mut self, gci: &Gci) {
        let mut lhs = Vec::new();
        self.lhs_atoms(&gci.lhs, &mut lhs);
        self.add_rhs(lhs, &gci.rhs);
    }

    /// An atom that holds for an element exactly when the element is derived
    /// to be an instance of `concept`.
    pub fn define_query(&mut self, concept: &Concept) -> AtomId {
        self.below(concept)
    }
}
